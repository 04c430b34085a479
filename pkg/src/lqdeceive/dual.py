"""Dual poisoning problem: misleading a learner of the minimizing regulator.

Roles are swapped relative to the primary problem: the defender of the plant
is now the learner (channel ``B_u``), and the adversary injects ``a = L x``
through ``B_a`` during the learning window so that the learner converges to
``N_a(L)`` instead of the optimal regulator.  Whenever the range of ``B_a``
is contained in the range of ``B_u`` the perturbed Riccati equation stays
solvable for every ``L``, so the poisoning optimization

    minimize  ||N_a(L) - N_bar||_F^2 + tr(L^T Gamma L)

is globally well posed and the same relaxation iteration applies with the
minimizing Riccati equation and its mirrored adjoint Lyapunov equation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import matsolve
from .deception import (
    BsorConfig,
    DeceptionResult,
    Plant,
    StationarityResiduals,
    _Eval,
    _run_relaxation,
    _warn_omega_bound,
    logger,
)
from .errors import NotStabilizable, OutOfDomain, ShapeMismatch
from .matsolve import as_matrix, as_square, require_spd

__all__ = [
    "DualProblem",
    "nominal_controller",
    "poisoned_controller",
    "range_condition",
    "dual_cost",
    "dual_gradient",
    "dual_bsor_solve",
]


@dataclass(frozen=True)
class DualProblem:
    """Plant with swapped roles, learner weights, target gain and regularizer."""

    plant: Plant
    Q: np.ndarray
    M: np.ndarray
    N_bar: np.ndarray
    Gamma: np.ndarray

    def __post_init__(self):
        plant = self.plant
        Q = require_spd(as_square(self.Q, "Q", plant.n), "Q")
        M = require_spd(as_square(self.M, "M", plant.m_u), "M")
        N_bar = as_matrix(self.N_bar, "N_bar", rows=plant.m_u, cols=plant.n)
        Gamma = require_spd(as_square(self.Gamma, "Gamma", plant.m_a), "Gamma")
        for name, val in (("Q", Q), ("M", M), ("N_bar", N_bar), ("Gamma", Gamma)):
            arr = np.array(val, dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def nominal_controller(dual: DualProblem):
    """Optimal regulator N* = -M^-1 B_u^T Z and its Riccati value Z."""
    Z, _ = matsolve.solve_are_min(dual.plant.A, dual.plant.B_u, dual.Q, dual.M)
    N_star = -np.linalg.solve(dual.M, dual.plant.B_u.T @ Z)
    return N_star, Z


def poisoned_controller(dual: DualProblem, L):
    """Regulator the learner converges to under the poisoning gain L.

    Solves the perturbed Riccati equation on ``A + B_a L``; always solvable
    when range(B_a) is contained in range(B_u).
    """
    plant = dual.plant
    L = as_matrix(L, "L", rows=plant.m_a, cols=plant.n)
    Z_a, _ = matsolve.solve_are_min(plant.A + plant.B_a @ L, plant.B_u, dual.Q, dual.M)
    N_a = -np.linalg.solve(dual.M, plant.B_u.T @ Z_a)
    return N_a, Z_a


def range_condition(B_a, B_u, rtol: float = 1e-10) -> bool:
    """True when range(B_a) is contained in range(B_u)."""
    B_a = np.atleast_2d(np.asarray(B_a, dtype=float))
    B_u = np.atleast_2d(np.asarray(B_u, dtype=float))
    if B_a.shape[0] != B_u.shape[0]:
        raise ShapeMismatch("B_a and B_u must have the same number of rows")
    scale = max(np.linalg.norm(B_u, "fro"), np.linalg.norm(B_a, "fro"), 1.0)
    tol = rtol * scale
    rank_u = np.linalg.matrix_rank(B_u, tol=tol)
    rank_stacked = np.linalg.matrix_rank(np.hstack([B_u, B_a]), tol=tol)
    return bool(rank_stacked == rank_u)


def _dual_adjoint_forcing(dual: DualProblem, Z_a: np.ndarray) -> np.ndarray:
    B_u, M = dual.plant.B_u, dual.M
    U = B_u @ np.linalg.solve(M, np.linalg.solve(M, B_u.T))  # B_u M^-2 B_u^T
    V = U @ Z_a
    W = dual.N_bar.T @ np.linalg.solve(M, B_u.T)             # N_bar^T M^-1 B_u^T
    return V + V.T + W + W.T


def _dual_eval(dual: DualProblem, L: np.ndarray,
               z_init: Optional[np.ndarray]) -> _Eval:
    plant = dual.plant
    try:
        Z_a, _ = matsolve.solve_are_min(plant.A + plant.B_a @ L, plant.B_u,
                                        dual.Q, dual.M, z_init=z_init)
    except NotStabilizable as exc:
        raise OutOfDomain(str(exc)) from exc
    N_a = -np.linalg.solve(dual.M, plant.B_u.T @ Z_a)
    A_c = plant.A + plant.B_a @ L + plant.B_u @ N_a
    D = _dual_adjoint_forcing(dual, Z_a)
    Pi = matsolve.solve_lyapunov(A_c, D, transposed=True, margin=0.0)
    coupling = plant.B_a.T @ Z_a @ Pi
    gradient = 2.0 * (dual.Gamma @ L + coupling)
    gain_gs = -np.linalg.solve(dual.Gamma, coupling)
    diff = N_a - dual.N_bar
    cost = float(np.sum(diff * diff)) + float(np.sum(L * (dual.Gamma @ L)))
    return _Eval(gain=L, value=Z_a, adjoint=Pi, cost=cost,
                 gradient=gradient, gain_gs=gain_gs)


def dual_cost(dual: DualProblem, L) -> float:
    """Poisoning cost ||N_a(L) - N_bar||_F^2 + tr(L^T Gamma L)."""
    L = as_matrix(L, "L", rows=dual.plant.m_a, cols=dual.plant.n)
    N_a, _ = poisoned_controller(dual, L)
    diff = N_a - dual.N_bar
    return float(np.sum(diff * diff)) + float(np.sum(L * (dual.Gamma @ L)))


def dual_gradient(dual: DualProblem, L) -> np.ndarray:
    """Gradient of the poisoning cost: 2 (Gamma L + B_a^T Z_a(L) Pi(L))."""
    L = as_matrix(L, "L", rows=dual.plant.m_a, cols=dual.plant.n)
    return _dual_eval(dual, L, None).gradient


def _dual_stationarity(dual: DualProblem, L: np.ndarray, Z_a: np.ndarray,
                       Pi: np.ndarray) -> StationarityResiduals:
    plant = dual.plant
    A_p = plant.A + plant.B_a @ L
    S_u = plant.B_u @ np.linalg.solve(dual.M, plant.B_u.T)
    r1 = np.linalg.norm(A_p.T @ Z_a + Z_a @ A_p + dual.Q - Z_a @ S_u @ Z_a, "fro")
    A_c = A_p - S_u @ Z_a
    D = _dual_adjoint_forcing(dual, Z_a)
    r2 = np.linalg.norm(A_c @ Pi + Pi @ A_c.T + D, "fro")
    r3 = np.linalg.norm(L + np.linalg.solve(dual.Gamma, plant.B_a.T @ Z_a @ Pi), "fro")
    return StationarityResiduals(float(r1), float(r2), float(r3))


def dual_bsor_solve(dual: DualProblem, config: BsorConfig = BsorConfig()) -> DeceptionResult:
    """Relaxation iteration for the dual poisoning optimization.

    Same iterate structure as the primary solver with the minimizing Riccati
    equation in place of the spoofed one and the mirrored adjoint Lyapunov
    equation; the result's ``Lambda_hat``/``P_u_hat``/``Pi_hat`` fields hold
    the poisoning gain, the perturbed Riccati value and its adjoint.

    The initializer is always the zero gain (the dual problem needs no deep
    stabilization: under the range condition every gain is feasible).
    """
    if not range_condition(dual.plant.B_a, dual.plant.B_u):
        logger.warning(
            "range(B_a) is not contained in range(B_u); the perturbed Riccati "
            "equation may become unsolvable for some poisoning gains")
    _warn_omega_bound(config, dual.Gamma)
    gain0 = np.zeros((dual.plant.m_a, dual.plant.n))

    def evaluate(gain, value_init):
        return _dual_eval(dual, gain, value_init)

    outcome = _run_relaxation(evaluate, gain0, dual.Gamma, config)
    if outcome.final is None:
        return DeceptionResult(
            Lambda_hat=gain0, P_u_hat=None, Pi_hat=None, trace=outcome.trace,
            status=outcome.status, stationarity=None, omega_final=outcome.omega_final,
            step_size_exceeded=outcome.step_size_exceeded, message=outcome.message)
    final = outcome.final
    stationarity = _dual_stationarity(dual, final.gain, final.value, final.adjoint)
    return DeceptionResult(
        Lambda_hat=final.gain, P_u_hat=final.value, Pi_hat=final.adjoint,
        trace=outcome.trace, status=outcome.status, stationarity=stationarity,
        omega_final=outcome.omega_final, step_size_exceeded=outcome.step_size_exceeded,
        message=outcome.message, offending_gain=outcome.offending_gain,
        offending_index=outcome.offending_index)
