"""Acceptance suite: every criterion prints one PASS/FAIL line (run with -s)."""

import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from helpers import (
    normalized_instance,
    random_plant,
    random_problem,
    scalar_plant,
    scalar_problem,
)
from lqdeceive import cli, matsolve
from lqdeceive.adversary import TrajectorySpec, datadriven_pi, kleinman_pi_max
from lqdeceive.deception import (
    AdversaryObjective,
    BsorConfig,
    DeceptionProblem,
    SolveStatus,
    bsor_solve,
    check_existence_condition,
    closed_loop_energy,
    deception_cost,
    deception_gradient,
    nominal_attack,
    spoofed_attack,
)
from lqdeceive.dual import DualProblem, dual_bsor_solve, poisoned_controller
from lqdeceive.errors import NoStabilizingSolution
from lqdeceive.robustness import MismatchSpec, mismatched_cost


@contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"[criterion {number:02d}] FAIL - {description}")
        raise
    print(f"[criterion {number:02d}] PASS - {description}")


# ---------------------------------------------------------------------------
# shared solver runs


@pytest.fixture(scope="module")
def descent_runs():
    """Ten seeded relaxation runs with full trace retention."""
    runs = []
    config = BsorConfig(omega=1e-2, tol=2e-4, max_iter=30000, keep_every=1)
    for seed in range(10):
        problem = random_problem(3, 2, 1, seed, gamma=1e-3)
        result = bsor_solve(problem, config)
        assert result.status is SolveStatus.CONVERGED, f"seed {seed}"
        runs.append((problem, result))
    return runs


@pytest.fixture(scope="module")
def suppression_runs():
    """Twenty range-condition instances with the attack norm normalized."""
    runs = []
    config = BsorConfig(omega=1e-2, tol=1e-3, max_iter=20000)
    for seed in range(20):
        problem = normalized_instance(seed)
        K_star, _ = nominal_attack(problem.plant, problem.objective)
        result = bsor_solve(problem, config)
        assert result.status is SolveStatus.CONVERGED, f"seed {seed}"
        K_u = spoofed_attack(problem, result.Lambda_hat)
        runs.append((problem, K_star, result.Lambda_hat, K_u))
    return runs


# ---------------------------------------------------------------------------
# criteria


def test_criterion_01_scalar_riccati_oracle():
    with criterion(1, "scalar maximizing-Riccati oracle and no-solution regime"):
        started = time.perf_counter()
        plant = scalar_plant()
        obj = AdversaryObjective([[1.0]], [[2.0]])
        K_star, P = nominal_attack(plant, obj)
        assert abs(P[0, 0] - (2.0 - math.sqrt(2.0))) <= 1e-10
        assert abs(K_star[0, 0] - (1.0 - math.sqrt(0.5))) <= 1e-10
        with pytest.raises(NoStabilizingSolution):
            nominal_attack(plant, AdversaryObjective([[1.0]], [[0.5]]))
        assert time.perf_counter() - started < 1.0


def test_criterion_02_deception_design_oracle(tmp_path):
    with criterion(2, "scalar deception design lands on the known gain"):
        started = time.perf_counter()
        cfg = {
            "schema_version": 1,
            "seed": 0,
            "plant": {"A": [[-1.0]], "B_u": [[1.0]], "B_a": [[1.0]]},
            "objective": {"Q": [[1.0]], "R": [[0.5]]},
            "deception": {"K_bar": [[0.2]], "gamma": 1e-6},
            "solver": {"omega": 1e-3, "tol": 1e-3, "max_iter": 20000,
                       "init": "deep:100"},
        }
        cfg_path = tmp_path / "benchmark.json"
        cfg_path.write_text(json.dumps(cfg))
        code = cli.main(["design-deception", "--config", str(cfg_path),
                         "--out", str(tmp_path)])
        assert code == 0
        report = json.loads((tmp_path / "design_deception_report.json").read_text())
        lam = report["Lambda_hat"][0][0]
        p_u = report["P_u_hat"][0][0]
        k_u = report["K_u_hat"][0][0]
        assert abs(lam - (-4.1)) <= 5e-2
        assert abs(p_u - 0.1) <= 1e-3
        assert abs((-1.0 + lam + k_u) - (-4.9)) <= 0.05
        assert abs((-1.0 + k_u) - (-0.8)) <= 1e-2
        assert time.perf_counter() - started < 30.0


def test_criterion_03_gradient_matches_finite_differences():
    with criterion(3, "analytic gradient vs central differences on 20 instances"):
        started = time.perf_counter()
        rng = np.random.default_rng(7)
        h = 1e-6
        for seed in range(20):
            dims_rng = np.random.default_rng(1000 + seed)
            n = int(dims_rng.integers(2, 6))
            m_u = int(dims_rng.integers(1, 3))
            m_a = int(dims_rng.integers(1, 3))
            K_bar = 0.05 * dims_rng.standard_normal((m_a, n))
            problem = random_problem(n, m_u, m_a, seed, K_bar=K_bar,
                                     gamma=float(dims_rng.uniform(1e-4, 1e-2)))
            Lam = 0.05 * rng.standard_normal((m_u, n))
            g = deception_gradient(problem, Lam)
            fd = np.zeros_like(g)
            for i in range(m_u):
                for j in range(n):
                    E = np.zeros_like(Lam)
                    E[i, j] = h
                    fd[i, j] = (deception_cost(problem, Lam + E)
                                - deception_cost(problem, Lam - E)) / (2.0 * h)
            err = np.linalg.norm(g - fd, "fro") / max(1.0, np.linalg.norm(g, "fro"))
            assert err <= 1e-5, f"seed {seed}: {err:.2e}"
        assert time.perf_counter() - started < 60.0


def test_criterion_04_relaxation_equals_scaled_gradient_step(descent_runs):
    with criterion(4, "each relaxation step equals the scaled gradient step"):
        for problem, result in descent_runs:
            Gamma = problem.Gamma
            B_u = problem.plant.B_u
            trace = result.trace
            for prev, cur in zip(trace, trace[1:]):
                grad = 2.0 * (Gamma @ prev.Lambda + B_u.T @ prev.P_u @ prev.Pi)
                predicted = prev.Lambda - 0.5 * cur.omega * np.linalg.solve(Gamma, grad)
                assert np.linalg.norm(cur.Lambda - predicted, "fro") <= 1e-10
            # spot-check against freshly solved gradients as well
            for prev, cur in zip(trace[:20], trace[1:21]):
                grad = deception_gradient(problem, prev.Lambda)
                predicted = prev.Lambda - 0.5 * cur.omega * np.linalg.solve(Gamma, grad)
                assert np.linalg.norm(cur.Lambda - predicted, "fro") <= 1e-10


def test_criterion_05_descent_and_stationarity(descent_runs):
    with criterion(5, "monotone descent, small final gradient, per-iterate residuals"):
        for problem, result in descent_runs:
            plant, obj = problem.plant, problem.objective
            S_a = plant.B_a @ np.linalg.solve(obj.R, plant.B_a.T)
            costs = [it.cost for it in result.trace]
            assert all(b <= a + 1e-12 for a, b in zip(costs, costs[1:]))
            assert result.trace[-1].grad_norm <= 1e-6
            Rinv_BaT = np.linalg.solve(obj.R, plant.B_a.T)
            T = problem.K_bar.T @ Rinv_BaT
            W2 = plant.B_a @ np.linalg.solve(obj.R, Rinv_BaT)
            for it in result.trace:
                A_s = plant.A + plant.B_u @ it.Lambda
                r_value = np.linalg.norm(
                    A_s.T @ it.P_u + it.P_u @ A_s + obj.Q
                    + it.P_u @ S_a @ it.P_u, "fro")
                assert r_value <= 1e-8
                A_t = A_s + S_a @ it.P_u
                C = -(T + T.T) + it.P_u @ W2 + W2.T @ it.P_u
                r_adj = np.linalg.norm(A_t @ it.Pi + it.Pi @ A_t.T + C, "fro")
                assert r_adj <= 1e-8


def test_criterion_06_existence_certificate():
    with criterion(6, "certificate values and no domain exit on certified instances"):
        problem = scalar_problem(r=2.0, k_bar=0.2, gamma=1.0)
        cert = check_existence_condition(problem)
        assert abs(cert.S[0, 0] - math.sqrt(2.0)) <= 1e-10
        assert abs(cert.rhs - 1.0 / (2.0 * math.sqrt(2.0))) <= 1e-10
        assert cert.holds
        config = BsorConfig(omega=0.5, tol=1e-8, max_iter=5000)
        for seed in range(10):
            plant = random_plant(3, 2, 1, seed)
            obj = AdversaryObjective(np.eye(3), 10.0 * np.eye(1))
            K_star, _ = nominal_attack(plant, obj)
            base = DeceptionProblem(plant, obj, K_star, np.eye(2))
            rhs = check_existence_condition(base).rhs
            K_bar = K_star + 0.3 * rhs / math.sqrt(K_star.size)
            certified = DeceptionProblem(plant, obj, K_bar, np.eye(2))
            assert check_existence_condition(certified).holds
            result = bsor_solve(certified, config)
            assert result.status is not SolveStatus.DOMAIN_EXIT
            assert result.status is SolveStatus.CONVERGED


def test_criterion_07_attack_suppression(suppression_runs):
    with criterion(7, "learned attack suppressed to half the nominal norm"):
        good = sum(
            np.linalg.norm(K_u, "fro") <= 0.5 * np.linalg.norm(K_star, "fro")
            for _, K_star, _, K_u in suppression_runs)
        assert good >= 18, f"only {good}/20 suppressed"


def test_criterion_08_mismatched_cost_bound(suppression_runs):
    with criterion(8, "softer/stiffer actual weights keep the realized cost below"):
        for problem, _, Lambda_hat, _ in suppression_runs:
            mismatch = MismatchSpec(problem.objective.Q / 2.0,
                                    2.0 * problem.objective.R)
            out = mismatched_cost(problem, mismatch, Lambda_hat)
            assert out.J_hat < deception_cost(problem, Lambda_hat)


def test_criterion_09_dual_feasibility_and_descent():
    with criterion(9, "dual poisoning always solvable and descends to stationarity"):
        config = BsorConfig(omega=1e-2, tol=5e-5, max_iter=30000, keep_every=1)
        for seed in range(3):
            plant = random_plant(3, 2, 2, seed, range_mode=True)
            dual = DualProblem(plant, np.eye(3), np.eye(2),
                               np.zeros((2, 3)), 1e-2 * np.eye(2))
            rng = np.random.default_rng(500 + seed)
            for _ in range(100):
                L = rng.standard_normal((2, 3))
                N_a, Z_a = poisoned_controller(dual, L)
                assert np.linalg.eigvalsh(Z_a).min() > 0.0
            result = dual_bsor_solve(dual, config)
            assert result.status is SolveStatus.CONVERGED
            costs = [it.cost for it in result.trace]
            assert all(b <= a + 1e-12 for a, b in zip(costs, costs[1:]))
            assert result.trace[-1].grad_norm <= 1e-6


def test_criterion_10_learner_indifference():
    with criterion(10, "both learners converge to the predicted deceived gain"):
        # scalar recursion oracle
        plant = scalar_plant()
        obj2 = AdversaryObjective([[1.0]], [[2.0]])
        recursion = kleinman_pi_max(plant, [[0.0]], obj2)
        assert abs(recursion.values[0][0, 0] - 0.5) <= 1e-12
        assert abs(recursion.iterations[1][0][0, 0] - 0.25) <= 1e-12
        assert abs(recursion.values[1][0, 0] - 7.0 / 12.0) <= 1e-12

        # scalar benchmark spoofed plant
        obj_half = AdversaryObjective([[1.0]], [[0.5]])
        problem = DeceptionProblem(plant, obj_half, [[0.2]], [[1e-6]])
        Lambda = np.array([[-4.1]])
        predicted = spoofed_attack(problem, Lambda)
        spec = TrajectorySpec(x0=[1.0], horizon=4.0, dt=1e-3, seed=1)
        mb = kleinman_pi_max(plant, Lambda, obj_half)
        dd = datadriven_pi(plant, Lambda, obj_half, spec)
        tol = 1e-2 * (1.0 + np.linalg.norm(predicted, "fro"))
        assert np.linalg.norm(mb.final_gain - predicted, "fro") <= tol
        assert np.linalg.norm(dd.final_gain - predicted, "fro") <= tol

        # five random instances with designed deception gains
        config = BsorConfig(omega=1e-2, tol=1e-3, max_iter=20000)
        for seed in range(5):
            problem = random_problem(3, 2, 1, seed, gamma=1e-3)
            result = bsor_solve(problem, config)
            assert result.status is SolveStatus.CONVERGED
            Lambda_hat = result.Lambda_hat
            predicted = spoofed_attack(problem, Lambda_hat)
            tol = 1e-2 * (1.0 + np.linalg.norm(predicted, "fro"))
            spec = TrajectorySpec(x0=[1.0, -0.5, 0.5], horizon=12.0, dt=1e-3,
                                  seed=100 + seed)
            mb = kleinman_pi_max(problem.plant, Lambda_hat, problem.objective)
            dd = datadriven_pi(problem.plant, Lambda_hat, problem.objective, spec)
            assert np.linalg.norm(mb.final_gain - predicted, "fro") <= tol
            assert np.linalg.norm(dd.final_gain - predicted, "fro") <= tol


def test_criterion_11_energy_semantics():
    with criterion(11, "energy values, instability marker, quadrature agreement"):
        assert closed_loop_energy([[-0.8]], [1.0]) == pytest.approx(0.625, abs=1e-12)
        assert math.isinf(closed_loop_energy([[0.1]], [1.0]))
        assert math.isinf(closed_loop_energy([[0.0]], [1.0]))
        rng = np.random.default_rng(17)
        for _ in range(5):
            A = rng.standard_normal((3, 3))
            A -= (matsolve.spectral_abscissa(A) + 2.0) * np.eye(3)
            x0 = rng.standard_normal(3)
            expected = closed_loop_energy(A, x0)
            dt, T = 5e-4, 6.0
            steps = int(T / dt)
            x = x0.copy()
            sq = np.empty(steps + 1)
            sq[0] = x @ x
            for k in range(steps):
                k1 = A @ x
                k2 = A @ (x + 0.5 * dt * k1)
                k3 = A @ (x + 0.5 * dt * k2)
                k4 = A @ (x + dt * k3)
                x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                sq[k + 1] = x @ x
            quad = np.trapezoid(sq, dx=dt)
            assert abs(quad - expected) <= 1e-4 * max(1.0, abs(expected))


def test_criterion_12_byte_determinism(tmp_path):
    with criterion(12, "identical config+seed reruns are byte-identical"):
        cfg = {
            "schema_version": 1,
            "seed": 9,
            "plant": {"A": [[-1.0]], "B_u": [[1.0]], "B_a": [[1.0]]},
            "objective": {"Q": [[1.0]], "R": [[2.0]]},
            "deception": {"K_bar": [[0.2]], "gamma": 1e-4},
            "solver": {"omega": 1e-2, "tol": 1e-4, "max_iter": 20000, "init": "zero"},
            "simulation": {"x0": [1.0], "horizon": 4.0, "dt": 1e-3,
                           "Lambda": [[-0.5]]},
            "mismatch": {"Q_hat": [[0.5]], "R_hat": [[4.0]]},
            "dual": {"M": [[1.0]], "N_bar": [[0.0]], "gamma": 1e-4},
            "energy": {"cases": [
                {"label": "stable", "A_cl": [[-0.8]], "x0": [1.0]},
                {"label": "unstable", "A_cl": [[0.1]], "x0": [1.0]},
            ]},
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        commands = [
            ["solve-attack"],
            ["design-deception"],
            ["simulate-learner"],
            ["dual"],
            ["robustness"],
            ["energy"],
            ["generate", "--n", "3", "--m-u", "2", "--m-a", "1", "--seed", "7"],
        ]
        for cmd in commands:
            snapshots = []
            for attempt in ("first", "second"):
                out = tmp_path / f"{cmd[0]}_{attempt}"
                argv = cmd + ["--out", str(out)]
                if cmd[0] != "generate":
                    argv += ["--config", str(cfg_path)]
                assert cli.main(argv) == 0, cmd[0]
                snapshot = {p.name: p.read_bytes() for p in sorted(out.iterdir())}
                assert snapshot, cmd[0]
                snapshots.append(snapshot)
            assert snapshots[0] == snapshots[1], f"{cmd[0]} outputs differ"
