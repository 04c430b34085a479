"""Deception quality under mismatched adversary objectives.

The deception gain is designed against assumed weights (Q, R); the actual
adversary may optimize different weights (Q_hat, R_hat).  This module
evaluates the realized cost under the actual weights, compares it with the
designed cost, and produces entrywise suppression-ratio tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import matsolve
from .deception import DeceptionProblem, spoofed_attack
from .errors import ShapeMismatch, SpoofedPlantUnstable
from .matsolve import as_matrix, as_square, require_spd

__all__ = [
    "MismatchSpec",
    "MismatchedCost",
    "RobustnessReport",
    "mismatched_cost",
    "suppression_ratios",
    "robustness_report",
]

# Denominator magnitudes below this are reported as not-applicable (NaN entry).
RATIO_DENOM_FLOOR = 1e-12


@dataclass(frozen=True)
class MismatchSpec:
    """The adversary's actual quadratic weights."""

    Q_hat: np.ndarray
    R_hat: np.ndarray

    def __post_init__(self):
        Q_hat = require_spd(as_square(self.Q_hat, "Q_hat"), "Q_hat")
        R_hat = require_spd(as_square(self.R_hat, "R_hat"), "R_hat")
        object.__setattr__(self, "Q_hat", Q_hat)
        object.__setattr__(self, "R_hat", R_hat)


@dataclass(frozen=True)
class MismatchedCost:
    J_hat: float
    K_hat_u: np.ndarray
    P_hat_u: np.ndarray


def mismatched_cost(problem: DeceptionProblem, mismatch: MismatchSpec,
                    Lambda) -> MismatchedCost:
    """Cost and learned gain when the adversary actually optimizes (Q_hat, R_hat).

    Solves the spoofed Riccati equation with the actual weights at the given
    deception gain; the regularizer term reuses the problem's Gamma.
    """
    plant = problem.plant
    Lambda = as_matrix(Lambda, "Lambda", rows=plant.m_u, cols=plant.n)
    if mismatch.Q_hat.shape[0] != plant.n:
        raise ShapeMismatch("Q_hat must match the state dimension")
    if mismatch.R_hat.shape[0] != plant.m_a:
        raise ShapeMismatch("R_hat must match the attack dimension")
    A_s = plant.A + plant.B_u @ Lambda
    if matsolve.spectral_abscissa(A_s) >= 0.0:
        raise SpoofedPlantUnstable("A + B_u Lambda must be Hurwitz")
    P_hat, _ = matsolve.solve_are_max(A_s, plant.B_a, mismatch.Q_hat, mismatch.R_hat)
    K_hat = np.linalg.solve(mismatch.R_hat, plant.B_a.T @ P_hat)
    diff = K_hat - problem.K_bar
    J_hat = float(np.sum(diff * diff)) + float(np.sum(Lambda * (problem.Gamma @ Lambda)))
    return MismatchedCost(J_hat=J_hat, K_hat_u=K_hat, P_hat_u=P_hat)


def suppression_ratios(K_num, K_den) -> np.ndarray:
    """Entrywise ratios [K_num]_ij / [K_den]_ij.

    Denominator entries with magnitude below 1e-12 yield NaN, the
    not-applicable marker.
    """
    K_num = np.atleast_2d(np.asarray(K_num, dtype=float))
    K_den = np.atleast_2d(np.asarray(K_den, dtype=float))
    if K_num.shape != K_den.shape:
        raise ShapeMismatch(f"shape mismatch: {K_num.shape} vs {K_den.shape}")
    out = np.full(K_num.shape, np.nan)
    ok = np.abs(K_den) >= RATIO_DENOM_FLOOR
    out[ok] = K_num[ok] / K_den[ok]
    return out


def _psd_leq(X: np.ndarray, Y: np.ndarray, tol: float = 1e-10) -> bool:
    """X <= Y in the positive-semidefinite order, within tolerance."""
    diff = 0.5 * ((Y - X) + (Y - X).T)
    scale = max(1.0, np.linalg.norm(Y, "fro"))
    return bool(np.linalg.eigvalsh(diff).min() >= -tol * scale)


@dataclass(frozen=True)
class RobustnessReport:
    J_tilde: float
    J_hat: float
    gap: float
    k_bar_is_zero: bool
    item1_applicable: bool
    item1_strict_holds: Optional[bool]
    bound_status: str
    K_u: np.ndarray
    K_hat_u: np.ndarray


def robustness_report(problem: DeceptionProblem, mismatch: MismatchSpec,
                      Lambda_hat) -> RobustnessReport:
    """Compare designed and realized deception costs at a given gain.

    When K_bar = 0, Q_hat <= Q and R_hat >= R, the realized cost is bounded
    by the designed one and the report states whether the strict inequality
    holds.  Outside that regime only the observed gap is reported (the
    comparison theory covers the zero-target case; anything else is
    descriptive).
    """
    plant = problem.plant
    Lambda_hat = as_matrix(Lambda_hat, "Lambda_hat", rows=plant.m_u, cols=plant.n)
    K_u = spoofed_attack(problem, Lambda_hat)
    diff = K_u - problem.K_bar
    J_tilde = float(np.sum(diff * diff)) + float(
        np.sum(Lambda_hat * (problem.Gamma @ Lambda_hat)))
    mm = mismatched_cost(problem, mismatch, Lambda_hat)

    k_bar_is_zero = bool(np.all(problem.K_bar == 0.0))
    weights_ordered = (_psd_leq(mismatch.Q_hat, problem.objective.Q)
                       and _psd_leq(problem.objective.R, mismatch.R_hat))
    item1_applicable = k_bar_is_zero and weights_ordered
    gap = mm.J_hat - J_tilde

    exact_match = (np.array_equal(mismatch.Q_hat, problem.objective.Q)
                   and np.array_equal(mismatch.R_hat, problem.objective.R))
    if exact_match:
        item1_strict_holds = None
        bound_status = "no_mismatch"
    elif item1_applicable:
        item1_strict_holds = bool(mm.J_hat < J_tilde)
        bound_status = ("strict_upper_bound_holds" if item1_strict_holds
                        else "strict_upper_bound_violated")
    else:
        item1_strict_holds = None
        bound_status = "gap_reported_only"
        if not k_bar_is_zero:
            bound_status = "gap_reported_only_nonzero_target"
    return RobustnessReport(
        J_tilde=J_tilde, J_hat=mm.J_hat, gap=float(gap),
        k_bar_is_zero=k_bar_is_zero, item1_applicable=item1_applicable,
        item1_strict_holds=item1_strict_holds, bound_status=bound_status,
        K_u=K_u, K_hat_u=mm.K_hat_u)
