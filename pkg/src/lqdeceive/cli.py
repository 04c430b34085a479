"""Batch front-end: config ingestion, one subcommand per workflow, CSV/JSON artifacts.

Subcommands
-----------
solve-attack      nominal attack gain, value matrix and closed-loop spectrum
design-deception  relaxation solve for the deception gain, trace CSV
simulate-learner  run adversary learners on the spoofed plant, distance CSVs
dual              poisoning gain against a minimizing-regulator learner
robustness        realized vs designed cost under mismatched weights, ratio tables
energy            state energy per case, "inf" marks closed-loop instability
generate          seeded random benchmark instance, reloadable as a config

Exit codes: 0 success; 1 input/config error; 2 no stabilizing solution /
not stabilizable; 3 solver did not converge (infeasible start, domain exit,
iteration cap); 4 data/learning failure (rank-deficient data, blow-up,
destabilized policy).

All outputs are deterministic for a fixed config and seed: reports carry no
timestamps (wall-clock goes to the log) and numbers are written in shortest
round-trip decimal form.  The env var LQDECEIVE_LOG selects error, info or
debug logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import adversary, deception, dual as dual_mod, matsolve, robustness
from .errors import (
    Blowup,
    LqDeceiveError,
    NominalAttackMissing,
    NoStabilizingSolution,
    NotStabilizable,
    PolicyDestabilized,
    RankDeficientData,
    SpoofedPlantUnstable,
)

logger = logging.getLogger("lqdeceive")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_SOLUTION = 2
EXIT_SOLVER = 3
EXIT_DATA = 4

SCHEMA_VERSION = 1


class ConfigError(LqDeceiveError):
    """Malformed configuration or command-line input."""


@dataclass
class RunReport:
    """In-memory result of a subcommand run.

    The serialized report excludes the wall clock so identical config+seed
    reruns are byte-identical; the timing is logged instead.
    """

    command: str
    status: str
    payload: dict
    exit_code: int
    wall_clock_seconds: float


# ---------------------------------------------------------------------------
# serialization helpers


def _fmt_num(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "NA"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [[_marker(float(v)) for v in row] for row in np.atleast_2d(obj)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return _marker(float(obj))
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _marker(x: float):
    if math.isnan(x):
        return "NA"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2)
        fh.write("\n")


def _write_csv(path: str, header: list, rows: list) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(cell if isinstance(cell, str) else _fmt_num(cell)
                              for cell in row) + "\n")


def _write_ratio_table(path: str, ratios: np.ndarray) -> None:
    header = [""] + [f"Col {j + 1}" for j in range(ratios.shape[1])]
    rows = [[f"Row {i + 1}"] + [ratios[i, j] for j in range(ratios.shape[1])]
            for i in range(ratios.shape[0])]
    _write_csv(path, header, rows)


def _eig_pairs(A: np.ndarray) -> list:
    eigs = np.linalg.eigvals(A)
    order = np.lexsort((eigs.imag, eigs.real))
    return [[float(eigs[i].real), float(eigs[i].imag)] for i in order]


# ---------------------------------------------------------------------------
# config ingestion


def _load_config(path: str) -> dict:
    if path is None:
        raise ConfigError("--config is required for this subcommand")
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    if "schema_version" not in cfg:
        raise ConfigError("config lacks schema_version")
    if cfg["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {cfg['schema_version']!r}")
    return cfg


def _section(cfg: dict, name: str) -> dict:
    sec = cfg.get(name)
    if sec is None:
        raise ConfigError(f"config section {name!r} is missing")
    if not isinstance(sec, dict):
        raise ConfigError(f"config section {name!r} must be an object")
    return sec


def _matrix(sec: dict, key: str, section: str) -> np.ndarray:
    if key not in sec:
        raise ConfigError(f"{section}.{key} is missing")
    raw = sec[key]
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise ConfigError(f"{section}.{key} must be an array of arrays")
    try:
        M = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}.{key} is not a rectangular numeric matrix: {exc}") from exc
    if M.ndim != 2:
        raise ConfigError(f"{section}.{key} must be two-dimensional")
    return M


def _vector(sec: dict, key: str, section: str, default=None) -> np.ndarray:
    if key not in sec:
        if default is not None:
            return np.asarray(default, dtype=float)
        raise ConfigError(f"{section}.{key} is missing")
    try:
        v = np.array(sec[key], dtype=float).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}.{key} is not a numeric vector: {exc}") from exc
    return v


def _gamma_matrix(raw, size: int, where: str) -> np.ndarray:
    """Scalar or matrix regularizer; an exact zero maps to the floor."""
    if isinstance(raw, (int, float)):
        g = float(raw)
        if g == 0.0:
            logger.info("%s: zero regularizer mapped to the floor %.1e * I",
                        where, deception.GAMMA_FLOOR)
            g = deception.GAMMA_FLOOR
        return g * np.eye(size)
    if isinstance(raw, list):
        M = np.array(raw, dtype=float)
        if M.shape != (size, size):
            raise ConfigError(f"{where} must be {size}x{size}")
        if np.all(M == 0.0):
            logger.info("%s: zero regularizer mapped to the floor %.1e * I",
                        where, deception.GAMMA_FLOOR)
            return deception.GAMMA_FLOOR * np.eye(size)
        return M
    raise ConfigError(f"{where} must be a scalar or a matrix")


def _build_plant(cfg: dict) -> deception.Plant:
    sec = _section(cfg, "plant")
    try:
        return deception.Plant(_matrix(sec, "A", "plant"),
                               _matrix(sec, "B_u", "plant"),
                               _matrix(sec, "B_a", "plant"))
    except LqDeceiveError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid plant: {exc}") from exc


def _build_objective(cfg: dict, plant: deception.Plant) -> deception.AdversaryObjective:
    sec = _section(cfg, "objective")
    try:
        obj = deception.AdversaryObjective(_matrix(sec, "Q", "objective"),
                                           _matrix(sec, "R", "objective"))
    except LqDeceiveError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid objective: {exc}") from exc
    if obj.Q.shape[0] != plant.n or obj.R.shape[0] != plant.m_a:
        raise ConfigError("objective dimensions do not match the plant")
    return obj


def _build_problem(cfg: dict) -> deception.DeceptionProblem:
    plant = _build_plant(cfg)
    obj = _build_objective(cfg, plant)
    sec = _section(cfg, "deception")
    K_bar = _matrix(sec, "K_bar", "deception")
    Gamma = _gamma_matrix(sec.get("gamma", 1e-4), plant.m_u, "deception.gamma")
    try:
        return deception.DeceptionProblem(plant, obj, K_bar, Gamma)
    except LqDeceiveError as exc:
        raise ConfigError(f"invalid deception problem: {exc}") from exc


def _parse_init(raw) -> deception.InitMode:
    if isinstance(raw, str):
        if raw == "zero":
            return deception.Zero()
        if raw == "deep":
            return deception.DeepStabilize()
        if raw.startswith("deep:"):
            try:
                return deception.DeepStabilize(float(raw.split(":", 1)[1]))
            except ValueError as exc:
                raise ConfigError(f"bad init spec {raw!r}") from exc
    raise ConfigError(f"init must be 'zero' or 'deep:SIGMA', got {raw!r}")


def _solver_config(cfg: dict, args) -> deception.BsorConfig:
    sec = cfg.get("solver", {})
    if not isinstance(sec, dict):
        raise ConfigError("config section 'solver' must be an object")
    omega = args.omega if args.omega is not None else sec.get("omega", 1e-3)
    tol = args.tol if args.tol is not None else sec.get("tol", 1e-6)
    max_iter = args.max_iter if args.max_iter is not None else sec.get("max_iter", 100_000)
    init = _parse_init(args.init if args.init is not None else sec.get("init", "zero"))
    try:
        return deception.BsorConfig(
            omega=float(omega), tol=float(tol), max_iter=int(max_iter), init=init,
            lipschitz_hint=sec.get("lipschitz_hint"),
            keep_every=int(sec.get("keep_every", 50)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid solver settings: {exc}") from exc


def _seed(cfg: dict, args) -> int:
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    try:
        seed = int(seed)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"seed must be an integer: {seed!r}") from exc
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")
    return seed


def _out_dir(args) -> str:
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve_attack(cfg: dict, args) -> RunReport:
    started = time.perf_counter()
    plant = _build_plant(cfg)
    obj = _build_objective(cfg, plant)
    out = _out_dir(args)
    try:
        K_star, P = deception.nominal_attack(plant, obj)
    except NoStabilizingSolution as exc:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "solve-attack",
            "status": "NoStabilizingSolution",
            "message": str(exc),
        }
        _write_json(os.path.join(out, "solve_attack_report.json"), payload)
        return RunReport("solve-attack", "NoStabilizingSolution", payload,
                         EXIT_NO_SOLUTION, time.perf_counter() - started)
    closed = plant.A + plant.B_a @ K_star
    _, cert = matsolve.solve_are_max(plant.A, plant.B_a, obj.Q, obj.R)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "solve-attack",
        "status": "ok",
        "K_star": K_star,
        "P": P,
        "closed_loop_eigenvalues": _eig_pairs(closed),
        "certificate": {
            "residual_norm": cert.residual_norm,
            "hurwitz_margin": cert.hurwitz_margin,
            "minimality_certified": cert.minimality_certified,
        },
    }
    _write_json(os.path.join(out, "solve_attack_report.json"), payload)
    return RunReport("solve-attack", "ok", payload, EXIT_OK,
                     time.perf_counter() - started)


def _existence_payload(problem: deception.DeceptionProblem) -> dict:
    try:
        cert = deception.check_existence_condition(problem)
    except NominalAttackMissing as exc:
        return {"applicable": False, "note": str(exc)}
    return {
        "applicable": True,
        "holds": cert.holds,
        "lhs": cert.lhs,
        "rhs": cert.rhs,
        "strengthened_eps": cert.strengthened_eps
        if cert.strengthened_eps is not None else "NA",
    }


def _trace_rows(trace) -> list:
    rows = []
    prev = None
    for it in trace:
        step = 0.0 if prev is None else float(np.linalg.norm(it.Lambda - prev, "fro"))
        rows.append([it.index, it.cost, it.grad_norm, step])
        prev = it.Lambda
    return rows


def cmd_design_deception(cfg: dict, args) -> RunReport:
    started = time.perf_counter()
    problem = _build_problem(cfg)
    config = _solver_config(cfg, args)
    out = _out_dir(args)
    result = deception.bsor_solve(problem, config)

    sim = cfg.get("simulation", {}) if isinstance(cfg.get("simulation", {}), dict) else {}
    x0 = _vector(sim, "x0", "simulation",
                 default=np.eye(problem.plant.n)[0])
    if x0.shape[0] != problem.plant.n:
        raise ConfigError("simulation.x0 must match the state dimension")

    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "design-deception",
        "status": result.status.value,
        "Lambda_hat": result.Lambda_hat,
        "omega_final": result.omega_final,
        "step_size_exceeded": result.step_size_exceeded,
        "iterations": max(len(result.trace) - 1, 0),
        "existence_condition": _existence_payload(problem),
    }
    if result.message:
        payload["message"] = result.message
    if result.P_u_hat is not None:
        K_u = np.linalg.solve(problem.objective.R,
                              problem.plant.B_a.T @ result.P_u_hat)
        deceived = problem.plant.A + problem.plant.B_u @ result.Lambda_hat \
            + problem.plant.B_a @ K_u
        attack_only = problem.plant.A + problem.plant.B_a @ K_u
        payload.update({
            "P_u_hat": result.P_u_hat,
            "Pi_hat": result.Pi_hat,
            "K_u_hat": K_u,
            "cost": result.trace[-1].cost,
            "grad_norm": result.trace[-1].grad_norm,
            "stationarity": {
                "value_eq": result.stationarity.value_eq,
                "adjoint_eq": result.stationarity.adjoint_eq,
                "gain_eq": result.stationarity.gain_eq,
            },
            "deceived_loop_eigenvalues": _eig_pairs(deceived),
            "attack_only_eigenvalues": _eig_pairs(attack_only),
            "energy": {
                "deceived_loop": deception.closed_loop_energy(deceived, x0),
                "attack_only_loop": deception.closed_loop_energy(attack_only, x0),
            },
        })
    _write_json(os.path.join(out, "design_deception_report.json"), payload)
    _write_csv(os.path.join(out, "design_deception_trace.csv"),
               ["iter", "cost", "grad_norm", "step_norm"], _trace_rows(result.trace))
    if cfg.get("solver", {}).get("dump_matrices"):
        kept = [{
            "index": it.index,
            "Lambda": it.Lambda,
            "P_u": it.P_u if it.P_u is not None else "NA",
            "Pi": it.Pi if it.Pi is not None else "NA",
        } for it in result.trace if it.P_u is not None]
        _write_json(os.path.join(out, "design_deception_iterates.json"),
                    {"schema_version": SCHEMA_VERSION, "iterates": kept})
    code = EXIT_OK if result.status is deception.SolveStatus.CONVERGED else EXIT_SOLVER
    return RunReport("design-deception", result.status.value, payload, code,
                     time.perf_counter() - started)


def cmd_simulate_learner(cfg: dict, args) -> RunReport:
    started = time.perf_counter()
    plant = _build_plant(cfg)
    obj = _build_objective(cfg, plant)
    sim = _section(cfg, "simulation")
    out = _out_dir(args)
    seed = _seed(cfg, args)

    Lambda = (_matrix(sim, "Lambda", "simulation") if "Lambda" in sim
              else np.zeros((plant.m_u, plant.n)))
    x0 = _vector(sim, "x0", "simulation")
    spec = adversary.TrajectorySpec(
        x0=x0,
        horizon=float(sim.get("horizon", 8.0)),
        dt=float(sim.get("dt", 1e-3)),
        seed=int(sim.get("seed", seed)),
        excitation_amplitude=float(sim.get("excitation_amplitude", 1.0)),
    )
    learners = sim.get("learners", ["model_based", "data_driven"])
    window = float(sim.get("window", 0.05))

    A_s = plant.A + plant.B_u @ Lambda
    P_u, _ = matsolve.solve_are_max(A_s, plant.B_a, obj.Q, obj.R)
    predicted = np.linalg.solve(obj.R, plant.B_a.T @ P_u)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate-learner",
        "status": "ok",
        "predicted_gain": predicted,
        "Lambda": Lambda,
        "learners": {},
    }
    for name in learners:
        if name == "model_based":
            trace = adversary.kleinman_pi_max(plant, Lambda, obj)
        elif name == "data_driven":
            trace = adversary.datadriven_pi(plant, Lambda, obj, spec, window=window)
        else:
            raise ConfigError(f"unknown learner {name!r}")
        csv_path = os.path.join(out, f"learner_{name}.csv")
        _write_csv(csv_path, ["iteration", "distance"],
                   [[i, d] for i, d in enumerate(trace.distances)])
        payload["learners"][name] = {
            "converged": trace.converged,
            "iterations": len(trace.iterations) - 1,
            "final_distance": trace.distances[-1],
            "final_gain": trace.final_gain,
            "csv": os.path.basename(csv_path),
        }
        if trace.reason:
            payload["learners"][name]["reason"] = trace.reason
    _write_json(os.path.join(out, "simulate_learner_report.json"), payload)
    return RunReport("simulate-learner", "ok", payload, EXIT_OK,
                     time.perf_counter() - started)


def cmd_dual(cfg: dict, args) -> RunReport:
    started = time.perf_counter()
    plant = _build_plant(cfg)
    obj = _build_objective(cfg, plant)
    sec = _section(cfg, "dual")
    out = _out_dir(args)
    M = _matrix(sec, "M", "dual")
    N_bar = _matrix(sec, "N_bar", "dual")
    Gamma = _gamma_matrix(sec.get("gamma", 1e-4), plant.m_a, "dual.gamma")
    try:
        dual = dual_mod.DualProblem(plant, obj.Q, M, N_bar, Gamma)
    except LqDeceiveError as exc:
        raise ConfigError(f"invalid dual problem: {exc}") from exc
    config = _solver_config(cfg, args)

    N_star, _ = dual_mod.nominal_controller(dual)
    result = dual_mod.dual_bsor_solve(dual, config)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "dual",
        "status": result.status.value,
        "range_condition": dual_mod.range_condition(plant.B_a, plant.B_u),
        "N_star": N_star,
        "L_hat": result.Lambda_hat,
        "omega_final": result.omega_final,
        "iterations": max(len(result.trace) - 1, 0),
    }
    if result.message:
        payload["message"] = result.message
    if result.P_u_hat is not None:
        N_a = -np.linalg.solve(dual.M, plant.B_u.T @ result.P_u_hat)
        payload.update({
            "Z_a_hat": result.P_u_hat,
            "N_a_hat": N_a,
            "cost": result.trace[-1].cost,
            "grad_norm": result.trace[-1].grad_norm,
            "stationarity": {
                "value_eq": result.stationarity.value_eq,
                "adjoint_eq": result.stationarity.adjoint_eq,
                "gain_eq": result.stationarity.gain_eq,
            },
        })
    _write_json(os.path.join(out, "dual_report.json"), payload)
    _write_csv(os.path.join(out, "dual_trace.csv"),
               ["iter", "cost", "grad_norm", "step_norm"], _trace_rows(result.trace))
    code = EXIT_OK if result.status is deception.SolveStatus.CONVERGED else EXIT_SOLVER
    return RunReport("dual", result.status.value, payload, code,
                     time.perf_counter() - started)


def cmd_robustness(cfg: dict, args) -> RunReport:
    started = time.perf_counter()
    problem = _build_problem(cfg)
    mm_sec = _section(cfg, "mismatch")
    out = _out_dir(args)
    try:
        mismatch = robustness.MismatchSpec(_matrix(mm_sec, "Q_hat", "mismatch"),
                                           _matrix(mm_sec, "R_hat", "mismatch"))
    except LqDeceiveError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid mismatch: {exc}") from exc
    rob_sec = cfg.get("robustness", {}) if isinstance(cfg.get("robustness", {}), dict) else {}
    plant = problem.plant
    if "Lambda" in rob_sec:
        Lambda = _matrix(rob_sec, "Lambda", "robustness")
    else:
        logger.info("robustness.Lambda not given; evaluating at the zero gain")
        Lambda = np.zeros((plant.m_u, plant.n))

    report = robustness.robustness_report(problem, mismatch, Lambda)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "robustness",
        "status": "ok",
        "J_tilde": report.J_tilde,
        "J_hat": report.J_hat,
        "gap": report.gap,
        "bound_status": report.bound_status,
        "k_bar_is_zero": report.k_bar_is_zero,
        "item1_applicable": report.item1_applicable,
        "item1_strict_holds": report.item1_strict_holds
        if report.item1_strict_holds is not None else "NA",
        "K_u": report.K_u,
        "K_hat_u": report.K_hat_u,
    }

    # suppression tables against the nominal gains, when those exist
    try:
        K_star, _ = deception.nominal_attack(plant, problem.objective)
        _write_ratio_table(os.path.join(out, "robustness_ratios_assumed.csv"),
                           robustness.suppression_ratios(report.K_u, K_star))
        payload["K_star"] = K_star
    except NoStabilizingSolution:
        payload["K_star"] = "NA"
    try:
        P_hat_star, _ = matsolve.solve_are_max(plant.A, plant.B_a,
                                               mismatch.Q_hat, mismatch.R_hat)
        K_hat_star = np.linalg.solve(mismatch.R_hat, plant.B_a.T @ P_hat_star)
        _write_ratio_table(os.path.join(out, "robustness_ratios_actual.csv"),
                           robustness.suppression_ratios(report.K_hat_u, K_hat_star))
        payload["K_hat_star"] = K_hat_star
    except NoStabilizingSolution:
        payload["K_hat_star"] = "NA"

    _write_json(os.path.join(out, "robustness_report.json"), payload)
    return RunReport("robustness", "ok", payload, EXIT_OK,
                     time.perf_counter() - started)


def cmd_energy(cfg: dict, args) -> RunReport:
    started = time.perf_counter()
    sec = _section(cfg, "energy")
    out = _out_dir(args)
    if "cases" in sec:
        raw_cases = sec["cases"]
        if not isinstance(raw_cases, list) or not raw_cases:
            raise ConfigError("energy.cases must be a non-empty array")
    else:
        raw_cases = [{"label": "case", "A_cl": sec.get("A_cl"), "x0": sec.get("x0")}]
    rows = []
    values = {}
    for idx, case in enumerate(raw_cases):
        if not isinstance(case, dict):
            raise ConfigError("each energy case must be an object")
        label = str(case.get("label", f"case{idx}"))
        A_cl = _matrix(case, "A_cl", f"energy.cases[{idx}]")
        x0 = _vector(case, "x0", f"energy.cases[{idx}]")
        try:
            value = deception.closed_loop_energy(A_cl, x0)
        except LqDeceiveError as exc:
            raise ConfigError(f"energy case {label!r}: {exc}") from exc
        rows.append([label, value])
        values[label] = value
    _write_csv(os.path.join(out, "energy.csv"), ["case", "energy"], rows)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "energy",
        "status": "ok",
        "energy": values,
    }
    _write_json(os.path.join(out, "energy_report.json"), payload)
    return RunReport("energy", "ok", payload, EXIT_OK, time.perf_counter() - started)


def cmd_generate(args) -> RunReport:
    started = time.perf_counter()
    n, m_u, m_a = args.n, args.m_u, args.m_a
    if n is None or m_u is None or m_a is None:
        raise ConfigError("generate requires --n, --m-u and --m-a")
    if n < 1 or m_u < 1 or m_a < 1:
        raise ConfigError("dimensions must be positive")
    seed = args.seed if args.seed is not None else 0
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")
    out = _out_dir(args)

    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    A -= (matsolve.spectral_abscissa(A) + 2.0) * np.eye(n)
    B_u = rng.standard_normal((n, m_u))
    if args.range_mode:
        B_a = B_u @ (0.7 * rng.standard_normal((m_u, m_a)))
    else:
        B_a = rng.standard_normal((n, m_a))
    assert matsolve.spectral_abscissa(A) <= -0.1

    instance = {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "plant": {"A": A, "B_u": B_u, "B_a": B_a},
        "objective": {"Q": np.eye(n), "R": 10.0 * np.eye(m_a)},
        "deception": {"K_bar": np.zeros((m_a, n)), "gamma": 1e-4},
        "solver": {"omega": 1e-3, "tol": 1e-4, "max_iter": 100000, "init": "zero"},
        "simulation": {"x0": [1.0] + [0.0] * (n - 1), "horizon": 8.0, "dt": 1e-3,
                       "excitation_amplitude": 1.0},
    }
    path = os.path.join(out, "instance.json")
    _write_json(path, instance)
    payload = {"status": "ok", "path": path}
    return RunReport("generate", "ok", payload, EXIT_OK, time.perf_counter() - started)


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to the JSON run configuration")
    common.add_argument("--out", help="output directory (default: current)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--omega", type=float, help="relaxation step size in (0, 2)")
    common.add_argument("--tol", type=float, help="stopping tolerance")
    common.add_argument("--max-iter", type=int, dest="max_iter", help="iteration cap")
    common.add_argument("--init", help="initializer: zero | deep:SIGMA")

    parser = argparse.ArgumentParser(
        prog="lqdeceive",
        description="Deception-gain synthesis against data-driven "
                    "linear-quadratic adversaries")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve-attack", parents=[common],
                   help="nominal attack gain and closed-loop spectrum")
    sub.add_parser("design-deception", parents=[common],
                   help="solve for the deception gain")
    sub.add_parser("simulate-learner", parents=[common],
                   help="run adversary learners on the spoofed plant")
    sub.add_parser("dual", parents=[common],
                   help="poisoning gain against a minimizing-regulator learner")
    sub.add_parser("robustness", parents=[common],
                   help="deception quality under mismatched weights")
    sub.add_parser("energy", parents=[common],
                   help="state energy per case; 'inf' marks instability")
    gen = sub.add_parser("generate", parents=[common],
                         help="emit a seeded random benchmark instance")
    gen.add_argument("--n", type=int, help="state dimension")
    gen.add_argument("--m-u", type=int, dest="m_u", help="defender input count")
    gen.add_argument("--m-a", type=int, dest="m_a", help="adversary input count")
    gen.add_argument("--range-mode", action="store_true",
                     help="build B_a inside the range of B_u")
    return parser


def _setup_logging() -> None:
    level_name = os.environ.get("LQDECEIVE_LOG", "error").lower()
    level = {"error": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}.get(level_name, logging.ERROR)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    logger.setLevel(level)


_DISPATCH = {
    "solve-attack": cmd_solve_attack,
    "design-deception": cmd_design_deception,
    "simulate-learner": cmd_simulate_learner,
    "dual": cmd_dual,
    "robustness": cmd_robustness,
    "energy": cmd_energy,
}


def main(argv=None) -> int:
    _setup_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # keep usage failures on the input-error code; --help stays 0
        return EXIT_OK if exc.code == 0 else EXIT_INPUT

    try:
        if args.command == "generate":
            report = cmd_generate(args)
        else:
            cfg = _load_config(args.config)
            report = _DISPATCH[args.command](cfg, args)
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except (NoStabilizingSolution, NotStabilizable, NominalAttackMissing,
            SpoofedPlantUnstable) as exc:
        logger.error("%s", exc)
        return EXIT_NO_SOLUTION
    except (RankDeficientData, Blowup, PolicyDestabilized) as exc:
        logger.error("%s", exc)
        return EXIT_DATA

    logger.info("%s finished: %s in %.3f s", report.command, report.status,
                report.wall_clock_seconds)
    return report.exit_code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
