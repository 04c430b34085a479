"""Deception-gain synthesis against a maximizing linear-quadratic adversary.

The defender applies state feedback ``u = Lambda x`` while the adversary
collects data, so the adversary ends up solving its attack problem on the
spoofed plant ``A + B_u Lambda``.  The gain it will learn is fully predicted
by the spoofed Riccati equation, which makes the deception design a smooth
(but implicitly constrained) matrix optimization:

    minimize  ||K_u(Lambda) - K_bar||_F^2 + tr(Lambda^T Gamma Lambda)

``bsor_solve`` runs the block successive over-relaxation iteration on the
stationarity system of that problem; one relaxation step is identical to a
``Gamma^{-1}``-scaled gradient step on the reduced cost, which is what the
convergence and monotonicity guarantees (and their tests) rest on.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np
import scipy.linalg as sla

from . import matsolve
from .errors import (
    NominalAttackMissing,
    NoStabilizingSolution,
    NotControllable,
    OutOfDomain,
    ShapeMismatch,
    ShiftTooSmall,
    SpoofedPlantUnstable,
)
from .matsolve import (
    HURWITZ_MARGIN,
    as_matrix,
    as_square,
    require_spd,
    spectral_abscissa,
    symmetrize,
)

logger = logging.getLogger("lqdeceive")

# Smallest admissible eigenvalue of the regularizer Gamma.  An exactly-zero
# regularizer is not representable because the gain update inverts Gamma.
GAMMA_FLOOR = 1e-12

# Gradient-norm floor in the stopping rule (the tolerance implied by the
# step guard through Gamma^{-1} scaling is unattainable for tiny Gamma).
GRAD_FLOOR = 1e-10

# Per-step cost increase tolerated before a step is rolled back.
COST_SLACK = 1e-12

# How often omega is halved before giving up on a step.
DOMAIN_RETRIES = 20
DESCENT_RETRIES = 60


def _frozen(M: np.ndarray) -> np.ndarray:
    out = np.array(M, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Plant:
    """Closed-loop state matrix plus the defender and adversary input channels."""

    A: np.ndarray
    B_u: np.ndarray
    B_a: np.ndarray

    def __post_init__(self):
        A = as_square(self.A, "A")
        n = A.shape[0]
        B_u = as_matrix(self.B_u, "B_u", rows=n)
        B_a = as_matrix(self.B_a, "B_a", rows=n)
        alpha = spectral_abscissa(A)
        if not alpha < -HURWITZ_MARGIN:
            raise ShapeMismatch(
                f"plant A must be strictly Hurwitz, spectral abscissa {alpha:.3e}"
            )
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "B_u", _frozen(B_u))
        object.__setattr__(self, "B_a", _frozen(B_a))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m_u(self) -> int:
        return self.B_u.shape[1]

    @property
    def m_a(self) -> int:
        return self.B_a.shape[1]


@dataclass(frozen=True)
class AdversaryObjective:
    """Quadratic weights of the adversary's maximizing problem."""

    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Q", _frozen(require_spd(self.Q, "Q")))
        object.__setattr__(self, "R", _frozen(require_spd(self.R, "R")))


@dataclass(frozen=True)
class DeceptionProblem:
    """Plant, adversary objective, target gain and regularizer."""

    plant: Plant
    objective: AdversaryObjective
    K_bar: np.ndarray
    Gamma: np.ndarray

    def __post_init__(self):
        plant = self.plant
        if self.objective.Q.shape[0] != plant.n:
            raise ShapeMismatch("Q must match the state dimension")
        if self.objective.R.shape[0] != plant.m_a:
            raise ShapeMismatch("R must match the attack dimension")
        K_bar = as_matrix(self.K_bar, "K_bar", rows=plant.m_a, cols=plant.n)
        Gamma = require_spd(as_square(self.Gamma, "Gamma", plant.m_u), "Gamma")
        lam_min = float(np.linalg.eigvalsh(Gamma).min())
        if lam_min < GAMMA_FLOOR * (1.0 - 1e-9):
            raise ShapeMismatch(
                f"Gamma must satisfy lambda_min >= {GAMMA_FLOOR:g} (got {lam_min:.3e}); "
                "map a zero regularizer to the floor explicitly"
            )
        object.__setattr__(self, "K_bar", _frozen(K_bar))
        object.__setattr__(self, "Gamma", _frozen(Gamma))


@dataclass(frozen=True)
class Zero:
    """Start the iteration from Lambda = 0 (valid when the nominal attack exists)."""


@dataclass(frozen=True)
class DeepStabilize:
    """Start from a gain that places the spoofed plant's abscissa at or below -sigma."""

    sigma: float = 100.0

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError("sigma must be positive")


InitMode = Union[Zero, DeepStabilize]


@dataclass(frozen=True)
class BsorConfig:
    """Solver knobs for the block successive over-relaxation iteration."""

    omega: float = 1e-3
    tol: float = 1e-6
    max_iter: int = 100_000
    init: InitMode = Zero()
    lipschitz_hint: Optional[float] = None
    keep_every: int = 50

    def __post_init__(self):
        if not 0.0 < self.omega < 2.0:
            raise ValueError("omega must lie in (0, 2)")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.keep_every < 1:
            raise ValueError("keep_every must be at least 1")
        if self.lipschitz_hint is not None and not self.lipschitz_hint > 0.0:
            raise ValueError("lipschitz_hint must be positive when given")


class SolveStatus(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    INFEASIBLE_START = "InfeasibleStart"
    DOMAIN_EXIT = "DomainExit"


@dataclass(frozen=True)
class DeceptionIterate:
    """One accepted iterate.  Value/adjoint matrices are retained sparsely."""

    index: int
    Lambda: np.ndarray
    P_u: Optional[np.ndarray]
    Pi: Optional[np.ndarray]
    cost: float
    grad_norm: float
    omega: Optional[float]  # relaxation factor used to accept this iterate


@dataclass(frozen=True)
class StationarityResiduals:
    """Frobenius residuals of the three stationarity equations at the output."""

    value_eq: float
    adjoint_eq: float
    gain_eq: float


@dataclass(frozen=True)
class DeceptionResult:
    Lambda_hat: np.ndarray
    P_u_hat: Optional[np.ndarray]
    Pi_hat: Optional[np.ndarray]
    trace: list
    status: SolveStatus
    stationarity: Optional[StationarityResiduals]
    omega_final: float
    step_size_exceeded: bool
    message: Optional[str] = None
    offending_gain: Optional[np.ndarray] = None
    offending_index: Optional[int] = None


# ---------------------------------------------------------------------------
# basic operations


def nominal_attack(plant: Plant, objective: AdversaryObjective):
    """Optimal attack gain K* = R^-1 B_a^T P against the unspoofed plant.

    Raises NoStabilizingSolution when the attack value is unbounded (the
    optimal attack would be destabilizing).
    """
    P, _ = matsolve.solve_are_max(plant.A, plant.B_a, objective.Q, objective.R)
    K_star = np.linalg.solve(objective.R, plant.B_a.T @ P)
    return K_star, P


def spoofed_value(problem: DeceptionProblem, Lambda, p_init: np.ndarray | None = None) -> np.ndarray:
    """Stabilizing solution P_u(Lambda) of the spoofed Riccati equation."""
    plant = problem.plant
    Lambda = as_matrix(Lambda, "Lambda", rows=plant.m_u, cols=plant.n)
    A_s = plant.A + plant.B_u @ Lambda
    alpha = spectral_abscissa(A_s)
    if not alpha < -HURWITZ_MARGIN:
        raise SpoofedPlantUnstable(
            f"A + B_u Lambda must be Hurwitz, spectral abscissa {alpha:.3e}"
        )
    P_u, _ = matsolve.solve_are_max(A_s, plant.B_a, problem.objective.Q,
                                    problem.objective.R, p_init=p_init)
    return P_u


def spoofed_attack(problem: DeceptionProblem, Lambda) -> np.ndarray:
    """Gain K_u(Lambda) = R^-1 B_a^T P_u(Lambda) the adversary will learn."""
    P_u = spoofed_value(problem, Lambda)
    return np.linalg.solve(problem.objective.R, problem.plant.B_a.T @ P_u)


def _cost_terms(problem: DeceptionProblem, Lambda: np.ndarray, K_u: np.ndarray) -> float:
    diff = K_u - problem.K_bar
    reg = float(np.sum(Lambda * (problem.Gamma @ Lambda)))
    return float(np.sum(diff * diff)) + reg


def deception_cost(problem: DeceptionProblem, Lambda) -> float:
    """Reduced cost ||K_u(Lambda) - K_bar||_F^2 + tr(Lambda^T Gamma Lambda)."""
    plant = problem.plant
    Lambda = as_matrix(Lambda, "Lambda", rows=plant.m_u, cols=plant.n)
    try:
        K_u = spoofed_attack(problem, Lambda)
    except (SpoofedPlantUnstable, NoStabilizingSolution) as exc:
        raise OutOfDomain(f"deception cost undefined at this gain: {exc}") from exc
    return _cost_terms(problem, Lambda, K_u)


def _adjoint_forcing(problem: DeceptionProblem, P_u: np.ndarray) -> np.ndarray:
    R = problem.objective.R
    B_a = problem.plant.B_a
    T = problem.K_bar.T @ np.linalg.solve(R, B_a.T)          # K_bar^T R^-1 B_a^T
    W2 = B_a @ np.linalg.solve(R, np.linalg.solve(R, B_a.T))  # B_a R^-2 B_a^T
    V = P_u @ W2
    return -(T + T.T) + V + V.T


def adjoint_pi(problem: DeceptionProblem, Lambda, P_u) -> np.ndarray:
    """Adjoint matrix: unique symmetric solution of the sensitivity Lyapunov equation.

    The plant of that equation is ``A + B_u Lambda + B_a R^-1 B_a^T P_u``,
    which is Hurwitz whenever P_u is the stabilizing Riccati solution.
    """
    plant = problem.plant
    Lambda = as_matrix(Lambda, "Lambda", rows=plant.m_u, cols=plant.n)
    P_u = as_square(P_u, "P_u", plant.n)
    A_tilde = (plant.A + plant.B_u @ Lambda
               + plant.B_a @ np.linalg.solve(problem.objective.R, plant.B_a.T @ P_u))
    C = _adjoint_forcing(problem, P_u)
    return matsolve.solve_lyapunov(A_tilde, C, transposed=True, margin=0.0)


def deception_gradient(problem: DeceptionProblem, Lambda) -> np.ndarray:
    """Gradient of the reduced cost: 2 (Gamma Lambda + B_u^T P_u(Lambda) Pi(Lambda))."""
    plant = problem.plant
    Lambda = as_matrix(Lambda, "Lambda", rows=plant.m_u, cols=plant.n)
    try:
        P_u = spoofed_value(problem, Lambda)
    except (SpoofedPlantUnstable, NoStabilizingSolution) as exc:
        raise OutOfDomain(f"gradient undefined at this gain: {exc}") from exc
    Pi = adjoint_pi(problem, Lambda, P_u)
    return 2.0 * (problem.Gamma @ Lambda + plant.B_u.T @ P_u @ Pi)


@dataclass(frozen=True)
class ExistenceCertificate:
    """Outcome of the sufficient feasibility/stability condition.

    ``strengthened_eps`` is the infimum of epsilon values in (0, 1) for which
    the strengthened inequality holds; any larger epsilon below one is also
    admissible.  None when even the plain condition fails to leave room.
    """

    holds: bool
    lhs: float
    rhs: float
    S: np.ndarray
    strengthened_eps: Optional[float]


def check_existence_condition(problem: DeceptionProblem) -> ExistenceCertificate:
    """Sufficient condition for the deception optimum to exist and stay stabilizing.

    S solves ``(A + B_a K*)^T S + S (A + B_a K*) + 2 I = 0`` and the condition
    compares ||K* - K_bar||_F against a Gamma-weighted bound built from S.

    Raises NominalAttackMissing when K* itself does not exist; deception can
    still be feasible in that regime, the certificate just does not apply.
    """
    plant = problem.plant
    try:
        K_star, _ = nominal_attack(plant, problem.objective)
    except NoStabilizingSolution as exc:
        raise NominalAttackMissing(
            "nominal attack gain does not exist; certificate inapplicable"
        ) from exc
    A_cl = plant.A + plant.B_a @ K_star
    S = matsolve.solve_lyapunov(A_cl, 2.0 * np.eye(plant.n), margin=0.0)
    lhs = float(np.linalg.norm(K_star - problem.K_bar, "fro"))
    sqrt_gmin = math.sqrt(float(np.linalg.eigvalsh(problem.Gamma).min()))
    denom = (sqrt_gmin * np.linalg.norm(S @ plant.B_a, "fro")
             + np.linalg.norm(S @ plant.B_u, "fro"))
    rhs = float(sqrt_gmin / denom)
    holds = lhs < rhs
    eps = 2.0 * lhs / rhs
    strengthened_eps = eps if eps < 1.0 else None
    return ExistenceCertificate(holds, lhs, rhs, S, strengthened_eps)


def init_gain(plant: Plant, mode: InitMode,
              objective: AdversaryObjective | None = None) -> np.ndarray:
    """Initial deception gain for the relaxation iteration.

    Zero returns the zero gain.  DeepStabilize(sigma) solves a minimizing
    Riccati equation on the shifted plant ``(A + sigma I, B_u)`` with identity
    weights and negates the regulator gain, which guarantees the spoofed
    plant's spectral abscissa is at most ``-sigma``; this requires (A, B_u)
    controllable.  When an objective is supplied, the spoofed Riccati
    equation is attempted at the initializer and ShiftTooSmall raised if it
    is still unsolvable.
    """
    if isinstance(mode, Zero):
        return np.zeros((plant.m_u, plant.n))
    if not isinstance(mode, DeepStabilize):
        raise TypeError(f"unknown init mode: {mode!r}")
    if not matsolve.is_controllable(plant.A, plant.B_u):
        raise NotControllable("(A, B_u) must be controllable for deep stabilization")
    n = plant.n
    shifted = plant.A + mode.sigma * np.eye(n)
    Z, _ = matsolve.solve_are_min(shifted, plant.B_u, np.eye(n), np.eye(plant.m_u))
    Lambda0 = -(plant.B_u.T @ Z)
    if objective is not None:
        A_s = plant.A + plant.B_u @ Lambda0
        try:
            matsolve.solve_are_max(A_s, plant.B_a, objective.Q, objective.R)
        except NoStabilizingSolution as exc:
            raise ShiftTooSmall(
                f"spoofed Riccati equation unsolvable at the deep-stabilizing "
                f"initializer (sigma={mode.sigma:g}); increase sigma"
            ) from exc
    return Lambda0


def closed_loop_energy(A_cl, x0) -> float:
    """State energy of ``x' = A_cl x`` from x0: integral of ||x(t)||^2 over [0, inf).

    Returns ``math.inf`` when A_cl is not strictly stable -- instability is a
    value here, not an error.  Otherwise equals ``x0^T W x0`` with W solving
    ``A_cl^T W + W A_cl + I = 0``.
    """
    A_cl = as_square(A_cl, "A_cl")
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape[0] != A_cl.shape[0]:
        raise ShapeMismatch("x0 must match the state dimension")
    if spectral_abscissa(A_cl) >= 0.0:
        return math.inf
    W = symmetrize(sla.solve_continuous_lyapunov(A_cl.T, -np.eye(A_cl.shape[0])))
    return float(x0 @ W @ x0)


# ---------------------------------------------------------------------------
# relaxation engine (shared with the dual solver)


@dataclass
class _Eval:
    gain: np.ndarray
    value: np.ndarray
    adjoint: np.ndarray
    cost: float
    gradient: np.ndarray
    gain_gs: np.ndarray

    @property
    def grad_norm(self) -> float:
        return float(np.linalg.norm(self.gradient, "fro"))


@dataclass
class _RelaxOutcome:
    status: SolveStatus
    trace: list
    final: Optional[_Eval]
    omega_final: float
    step_size_exceeded: bool
    message: Optional[str]
    offending_gain: Optional[np.ndarray]
    offending_index: Optional[int]


def _iterate_from(index: int, ev: _Eval, omega: Optional[float], keep: bool) -> DeceptionIterate:
    return DeceptionIterate(
        index=index,
        Lambda=ev.gain.copy(),
        P_u=ev.value.copy() if keep else None,
        Pi=ev.adjoint.copy() if keep else None,
        cost=ev.cost,
        grad_norm=ev.grad_norm,
        omega=omega,
    )


def _run_relaxation(evaluate: Callable[[np.ndarray, Optional[np.ndarray]], _Eval],
                    gain0: np.ndarray, gamma: np.ndarray,
                    config: BsorConfig) -> _RelaxOutcome:
    omega = float(config.omega)
    grad_tol = max(GRAD_FLOOR, 2.0 * config.tol * float(np.linalg.eigvalsh(gamma).max()))

    try:
        cur = evaluate(gain0, None)
    except OutOfDomain as exc:
        return _RelaxOutcome(SolveStatus.INFEASIBLE_START, [], None, omega, False,
                             f"initial gain outside the solvable domain: {exc}", None, None)

    trace = [_iterate_from(0, cur, None, keep=True)]
    step_flag = False
    status = SolveStatus.MAX_ITERATIONS
    message: Optional[str] = None
    offending: Optional[np.ndarray] = None
    offending_index: Optional[int] = None

    # A stationary start converges immediately with a single trace entry.
    prospective = omega * float(np.linalg.norm(cur.gain_gs - cur.gain, "fro"))
    if prospective < config.tol * omega and cur.grad_norm <= grad_tol:
        status = SolveStatus.CONVERGED
    else:
        for i in range(1, config.max_iter + 1):
            nxt = None
            domain_halvings = 0
            descent_halvings = 0
            while True:
                candidate = cur.gain + omega * (cur.gain_gs - cur.gain)
                try:
                    cand = evaluate(candidate, cur.value)
                except OutOfDomain as exc:
                    domain_halvings += 1
                    if domain_halvings > DOMAIN_RETRIES:
                        status = SolveStatus.DOMAIN_EXIT
                        offending = candidate
                        offending_index = i
                        message = f"left the solvable domain at iteration {i}: {exc}"
                        break
                    omega *= 0.5
                    continue
                if cand.cost > cur.cost + COST_SLACK:
                    # non-descending step: the omega bound was exceeded
                    descent_halvings += 1
                    step_flag = True
                    if descent_halvings > DESCENT_RETRIES:
                        message = "step size exhausted without descent"
                        break
                    omega *= 0.5
                    continue
                nxt = cand
                break
            if nxt is None:
                break
            step_norm = float(np.linalg.norm(nxt.gain - cur.gain, "fro"))
            cur = nxt
            keep = (i % config.keep_every == 0)
            trace.append(_iterate_from(i, cur, omega, keep))
            if step_norm < config.tol * omega and cur.grad_norm <= grad_tol:
                status = SolveStatus.CONVERGED
                break

    if trace and trace[-1].P_u is None:
        trace[-1] = replace(trace[-1], P_u=cur.value.copy(), Pi=cur.adjoint.copy())
    if step_flag:
        logger.warning("step-size bound exceeded; omega reduced to %.3e", omega)
    return _RelaxOutcome(status, trace, cur, omega, step_flag, message,
                         offending, offending_index)


def _warn_omega_bound(config: BsorConfig, gamma: np.ndarray) -> None:
    if config.lipschitz_hint is None:
        return
    eig = np.linalg.eigvalsh(gamma)
    bound = (2.0 / config.lipschitz_hint) * float(eig.min()) ** 2 / float(eig.max())
    if config.omega >= bound:
        logger.warning(
            "omega=%.3e exceeds the descent bound %.3e implied by the "
            "Lipschitz hint; expect adaptive halving", config.omega, bound,
        )


def _stationarity_residuals(problem: DeceptionProblem, Lam: np.ndarray,
                            P_u: np.ndarray, Pi: np.ndarray) -> StationarityResiduals:
    plant, obj = problem.plant, problem.objective
    A_s = plant.A + plant.B_u @ Lam
    S_a = plant.B_a @ np.linalg.solve(obj.R, plant.B_a.T)
    r1 = np.linalg.norm(A_s.T @ P_u + P_u @ A_s + obj.Q + P_u @ S_a @ P_u, "fro")
    A_tilde = A_s + S_a @ P_u
    C = _adjoint_forcing(problem, P_u)
    r2 = np.linalg.norm(A_tilde @ Pi + Pi @ A_tilde.T + C, "fro")
    r3 = np.linalg.norm(Lam + np.linalg.solve(problem.Gamma, plant.B_u.T @ P_u @ Pi), "fro")
    return StationarityResiduals(float(r1), float(r2), float(r3))


def bsor_solve(problem: DeceptionProblem, config: BsorConfig = BsorConfig()) -> DeceptionResult:
    """Block successive over-relaxation on the deception stationarity system.

    Each iteration solves the spoofed Riccati equation at the current gain,
    then the adjoint Lyapunov equation, forms the relaxed gain update, and
    rolls back/halves omega on cost increases or domain exits.  One accepted
    step equals ``Lambda - (omega/2) Gamma^{-1} grad`` exactly.

    Infeasible starts, domain exits and iteration exhaustion are reported as
    statuses on the result, never raised.
    """
    plant, obj = problem.plant, problem.objective
    _warn_omega_bound(config, problem.Gamma)

    try:
        gain0 = init_gain(plant, config.init, obj)
    except ShiftTooSmall as exc:
        return DeceptionResult(
            Lambda_hat=np.zeros((plant.m_u, plant.n)), P_u_hat=None, Pi_hat=None,
            trace=[], status=SolveStatus.INFEASIBLE_START, stationarity=None,
            omega_final=config.omega, step_size_exceeded=False, message=str(exc))

    # feasible-start requirement: J(Lambda0) <= J(0) whenever K* exists
    if not isinstance(config.init, Zero):
        try:
            K_star, _ = nominal_attack(plant, obj)
        except NoStabilizingSolution:
            K_star = None
        if K_star is not None:
            cost_zero = _cost_terms(problem, np.zeros_like(gain0), K_star)
            try:
                cost_init = deception_cost(problem, gain0)
            except OutOfDomain as exc:
                return DeceptionResult(
                    Lambda_hat=gain0, P_u_hat=None, Pi_hat=None, trace=[],
                    status=SolveStatus.INFEASIBLE_START, stationarity=None,
                    omega_final=config.omega, step_size_exceeded=False, message=str(exc))
            if cost_init > cost_zero + COST_SLACK:
                return DeceptionResult(
                    Lambda_hat=gain0, P_u_hat=None, Pi_hat=None, trace=[],
                    status=SolveStatus.INFEASIBLE_START, stationarity=None,
                    omega_final=config.omega, step_size_exceeded=False,
                    message=(f"initial cost {cost_init:.6e} exceeds the zero-gain "
                             f"cost {cost_zero:.6e}; use the zero initializer"))

    R = obj.R
    B_u, B_a = plant.B_u, plant.B_a

    def evaluate(gain: np.ndarray, value_init: Optional[np.ndarray]) -> _Eval:
        try:
            P_u = spoofed_value(problem, gain, p_init=value_init)
        except (SpoofedPlantUnstable, NoStabilizingSolution) as exc:
            raise OutOfDomain(str(exc)) from exc
        K_u = np.linalg.solve(R, B_a.T @ P_u)
        Pi = adjoint_pi(problem, gain, P_u)
        coupling = B_u.T @ P_u @ Pi
        gradient = 2.0 * (problem.Gamma @ gain + coupling)
        gain_gs = -np.linalg.solve(problem.Gamma, coupling)
        return _Eval(gain=gain, value=P_u, adjoint=Pi,
                     cost=_cost_terms(problem, gain, K_u),
                     gradient=gradient, gain_gs=gain_gs)

    outcome = _run_relaxation(evaluate, gain0, problem.Gamma, config)
    if outcome.final is None:
        return DeceptionResult(
            Lambda_hat=gain0, P_u_hat=None, Pi_hat=None, trace=outcome.trace,
            status=outcome.status, stationarity=None, omega_final=outcome.omega_final,
            step_size_exceeded=outcome.step_size_exceeded, message=outcome.message)

    final = outcome.final
    stationarity = _stationarity_residuals(problem, final.gain, final.value, final.adjoint)
    return DeceptionResult(
        Lambda_hat=final.gain, P_u_hat=final.value, Pi_hat=final.adjoint,
        trace=outcome.trace, status=outcome.status, stationarity=stationarity,
        omega_final=outcome.omega_final, step_size_exceeded=outcome.step_size_exceeded,
        message=outcome.message, offending_gain=outcome.offending_gain,
        offending_index=outcome.offending_index)
