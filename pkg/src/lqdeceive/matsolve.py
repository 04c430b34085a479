"""Certified dense solvers for Lyapunov and algebraic Riccati equations.

Every solver in this module checks its preconditions, solves with a dense
method, and then *certifies* the result: residual norms are gated against
fixed tolerances and stabilizing solutions are verified by an explicit
closed-loop eigenvalue check.  Two Riccati variants are covered:

* ``solve_are_max`` -- the sign-indefinite equation
  ``A^T P + P A + Q + P B R^-1 B^T P = 0`` arising from a maximizing
  linear-quadratic problem.  Its stabilizing solution (the one making
  ``A + B R^-1 B^T P`` Hurwitz) is the minimal positive-definite solution.
* ``solve_are_min`` -- the standard equation
  ``A^T Z + Z A + Q - Z B R^-1 B^T Z = 0`` of a minimizing regulator.

All operations are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    EigenFailure,
    LqDeceiveError,
    NonSymmetricInput,
    NoStabilizingSolution,
    NotHurwitz,
    NotHurwitzInput,
    NotStabilizable,
    ShapeMismatch,
)

__all__ = [
    "HURWITZ_MARGIN",
    "SolveCertificate",
    "spectral_abscissa",
    "symmetrize",
    "solve_lyapunov",
    "solve_are_max",
    "solve_are_min",
    "is_stabilizable",
    "is_controllable",
]

# Spectral-abscissa threshold below which a matrix counts as strictly Hurwitz.
HURWITZ_MARGIN = 1e-9

# Residual gates, relative to max(1, ||C||_F) resp. max(1, ||Q||_F).
LYAP_RTOL = 1e-10
ARE_RTOL = 1e-9

# Symmetry slack for user-supplied matrices, relative to max(1, ||X||_F).
SYM_RTOL = 1e-8


@dataclass(frozen=True)
class SolveCertificate:
    """Evidence attached to a Riccati solution.

    Attributes
    ----------
    residual_norm : float
        Frobenius norm of the matrix-equation residual.
    hurwitz_margin : float
        Negated spectral abscissa of the closed-loop matrix; positive means
        the closed loop is strictly stable.
    minimality_certified : bool
        True when the returned solution is stabilizing (and therefore the
        minimal positive-definite solution).
    """

    residual_norm: float
    hurwitz_margin: float
    minimality_certified: bool

    def __post_init__(self):
        if self.residual_norm < 0.0:
            raise ValueError("residual_norm must be nonnegative")
        if self.minimality_certified and not self.hurwitz_margin > 0.0:
            raise ValueError("a certified solution must have a positive Hurwitz margin")


def as_matrix(M, name: str, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce to a 2-D float array and check shape and finiteness."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2:
        raise ShapeMismatch(f"{name} must be a matrix, got ndim={M.ndim}")
    if rows is not None and M.shape[0] != rows:
        raise ShapeMismatch(f"{name} must have {rows} rows, got {M.shape[0]}")
    if cols is not None and M.shape[1] != cols:
        raise ShapeMismatch(f"{name} must have {cols} columns, got {M.shape[1]}")
    if not np.all(np.isfinite(M)):
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return M


def as_square(M, name: str, n: int | None = None) -> np.ndarray:
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got {M.shape}")
    if n is not None and M.shape[0] != n:
        raise ShapeMismatch(f"{name} must be {n}x{n}, got {M.shape}")
    return M


def symmetrize(X: np.ndarray) -> np.ndarray:
    """Return the symmetric part (X + X^T) / 2."""
    return 0.5 * (X + X.T)


def require_symmetric(M: np.ndarray, name: str, rtol: float = SYM_RTOL) -> np.ndarray:
    drift = np.linalg.norm(M - M.T, "fro")
    if drift > rtol * max(1.0, np.linalg.norm(M, "fro")):
        raise NonSymmetricInput(f"{name} is not symmetric (drift {drift:.3e})")
    return symmetrize(M)


def require_spd(M, name: str, rtol: float = SYM_RTOL) -> np.ndarray:
    """Validate a symmetric positive-definite matrix and return its symmetric part."""
    M = require_symmetric(as_square(M, name), name, rtol)
    lam_min = float(np.linalg.eigvalsh(M).min())
    if lam_min <= 0.0:
        raise NonSymmetricInput(f"{name} must be positive definite (lambda_min={lam_min:.3e})")
    return M


def spectral_abscissa(A) -> float:
    """Largest real part over the eigenvalues of ``A``."""
    A = as_square(A, "A")
    try:
        eigs = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigenvalue computation failed: {exc}") from exc
    return float(eigs.real.max())


def is_hurwitz(A, margin: float = HURWITZ_MARGIN) -> bool:
    return spectral_abscissa(A) < -margin


def solve_lyapunov(A, C, transposed: bool = False, margin: float = HURWITZ_MARGIN) -> np.ndarray:
    """Solve the Lyapunov equation ``A^T X + X A + C = 0`` for symmetric X.

    Parameters
    ----------
    A : array_like
        Strictly Hurwitz square matrix (checked against ``margin``).
    C : array_like
        Symmetric matrix; positive definiteness of C implies X > 0.
    transposed : bool, optional
        When True, solve the companion form ``A X + X A^T + C = 0`` instead.
    margin : float, optional
        Spectral-abscissa threshold for the Hurwitz check.

    Returns
    -------
    X : ndarray
        Symmetric solution with residual at most ``1e-10 * max(1, ||C||_F)``.

    Raises
    ------
    NotHurwitz
        If the spectral abscissa of A is >= -margin.
    NonSymmetricInput
        If C is not symmetric within tolerance.
    """
    A = as_square(A, "A")
    C = require_symmetric(as_square(C, "C", A.shape[0]), "C")
    alpha = spectral_abscissa(A)
    if not alpha < -margin:
        raise NotHurwitz(f"A must be strictly Hurwitz, spectral abscissa {alpha:.3e}")
    # scipy solves a X + X a^T = q; pick a to match the requested convention.
    a = A if transposed else A.T
    X = symmetrize(sla.solve_continuous_lyapunov(a, -C))
    residual = a @ X + X @ a.T + C
    res_norm = float(np.linalg.norm(residual, "fro"))
    if res_norm > LYAP_RTOL * max(1.0, np.linalg.norm(C, "fro")):
        raise LqDeceiveError(
            f"Lyapunov residual {res_norm:.3e} exceeds the certification gate"
        )
    return X


def _riccati_residual(A_eff, S, Q, P, sign):
    """Residual and the float-noise scale of its evaluation."""
    T1 = A_eff.T @ P
    T3 = P @ S @ P
    residual = T1 + T1.T + Q + sign * T3
    scale = 2.0 * np.linalg.norm(T1, "fro") + np.linalg.norm(Q, "fro") \
        + np.linalg.norm(T3, "fro")
    return float(np.linalg.norm(residual, "fro")), float(scale)


def _newton_refine(A_eff: np.ndarray, S: np.ndarray, Q: np.ndarray, P0: np.ndarray,
                   sign: float, max_steps: int = 15) -> np.ndarray | None:
    """Newton iteration on ``A^T P + P A + Q + sign * P S P = 0``.

    Iterates while the residual strictly decreases and the intermediate
    closed loops stay Hurwitz; returns the best iterate, or None when the
    start is outside the stabilizing region.  Validation is the caller's job.
    """
    P = symmetrize(np.asarray(P0, dtype=float))
    if not np.all(np.isfinite(P)):
        return None
    best, best_res = P, _riccati_residual(A_eff, S, Q, P, sign)[0]
    for _ in range(max_steps):
        Acl = A_eff + sign * (S @ P)
        if spectral_abscissa(Acl) >= 0.0:
            return best if best is not P else None
        F = A_eff.T @ P + P @ A_eff + Q + sign * (P @ S @ P)
        try:
            step = sla.solve_continuous_lyapunov(Acl.T, -F)
        except Exception:
            break
        P = symmetrize(P + step)
        if not np.all(np.isfinite(P)):
            break
        res = _riccati_residual(A_eff, S, Q, P, sign)[0]
        if res >= best_res:
            break
        best, best_res = P, res
    return best


def _certify(P: np.ndarray, res_norm: float, res_scale: float, Acl: np.ndarray,
             base_gate: float, margin: float) -> SolveCertificate | None:
    # base_gate binds at moderate scales; the second term is the float64
    # noise floor of evaluating the residual itself (large-norm solutions,
    # e.g. deep-stabilizing shifted solves, cannot beat it)
    gate = max(base_gate, 1e-10 * res_scale)
    if res_norm > gate:
        return None
    if float(np.linalg.eigvalsh(P).min()) <= 0.0:
        return None
    cl_alpha = spectral_abscissa(Acl)
    if not cl_alpha < -margin:
        return None
    return SolveCertificate(res_norm, -cl_alpha, True)


def solve_are_max(A, B, Q, R, p_init: np.ndarray | None = None,
                   margin: float = HURWITZ_MARGIN) -> tuple[np.ndarray, SolveCertificate]:
    """Solve ``A^T P + P A + Q + P B R^-1 B^T P = 0`` for its stabilizing solution.

    The stabilizing solution makes ``A + B R^-1 B^T P`` Hurwitz and is the
    minimal positive-definite solution.  A must be Hurwitz for the underlying
    maximizing problem to have bounded value.

    Parameters
    ----------
    A, B, Q, R : array_like
        Problem data; Q and R symmetric positive definite.
    p_init : ndarray, optional
        Warm start; when close to the solution a Newton refinement replaces
        the dense Schur solve.  The certificate is recomputed either way.

    Returns
    -------
    (P, cert) : (ndarray, SolveCertificate)

    Raises
    ------
    NotHurwitzInput
        If A is not strictly Hurwitz.
    NoStabilizingSolution
        If no stabilizing positive-definite solution exists.
    """
    A = as_square(A, "A")
    n = A.shape[0]
    B = as_matrix(B, "B", rows=n)
    Q = require_spd(as_square(Q, "Q", n), "Q")
    R = require_spd(as_square(R, "R", B.shape[1]), "R")
    alpha = spectral_abscissa(A)
    if not alpha < -margin:
        raise NotHurwitzInput(f"A must be strictly Hurwitz, spectral abscissa {alpha:.3e}")

    S = symmetrize(B @ np.linalg.solve(R, B.T))
    gate = ARE_RTOL * max(1.0, np.linalg.norm(Q, "fro"))

    def validate(P):
        P = symmetrize(P)
        res_norm, res_scale = _riccati_residual(A, S, Q, P, +1.0)
        cert = _certify(P, res_norm, res_scale, A + S @ P, gate, margin)
        return (P, cert) if cert is not None else None

    if p_init is not None:
        refined = _newton_refine(A, S, Q, p_init, sign=+1.0)
        if refined is not None:
            out = validate(refined)
            if out is not None:
                return out

    try:
        # Negating the weight turns the sign-indefinite equation into the
        # standard continuous-time form scipy solves.
        P = sla.solve_continuous_are(A, B, Q, -R)
    except (sla.LinAlgError, np.linalg.LinAlgError, ValueError) as exc:
        raise NoStabilizingSolution(
            f"maximizing Riccati equation has no stabilizing solution: {exc}"
        ) from exc
    out = validate(P)
    if out is None:
        # polish the Schur solution before giving up on certification
        refined = _newton_refine(A, S, Q, P, sign=+1.0)
        out = validate(refined) if refined is not None else None
    if out is None:
        raise NoStabilizingSolution(
            "maximizing Riccati solve did not certify (solution not stabilizing "
            "positive definite within tolerance)"
        )
    return out


def solve_are_min(A, B, Q, R_ctrl, z_init: np.ndarray | None = None,
                   margin: float = HURWITZ_MARGIN) -> tuple[np.ndarray, SolveCertificate]:
    """Solve ``A^T Z + Z A + Q - Z B R^-1 B^T Z = 0`` for its stabilizing solution.

    Requires (A, B) stabilizable; with Q > 0 the stabilizing solution then
    exists, is positive definite, and makes ``A - B R^-1 B^T Z`` Hurwitz.

    Raises
    ------
    NotStabilizable
        If the pair (A, B) fails the eigenvector (PBH) stabilizability test.
    """
    A = as_square(A, "A")
    n = A.shape[0]
    B = as_matrix(B, "B", rows=n)
    Q = require_spd(as_square(Q, "Q", n), "Q")
    R_ctrl = require_spd(as_square(R_ctrl, "R_ctrl", B.shape[1]), "R_ctrl")
    if not is_stabilizable(A, B):
        raise NotStabilizable("(A, B) is not stabilizable")

    S = symmetrize(B @ np.linalg.solve(R_ctrl, B.T))
    gate = ARE_RTOL * max(1.0, np.linalg.norm(Q, "fro"))

    def validate(Z):
        Z = symmetrize(Z)
        res_norm, res_scale = _riccati_residual(A, S, Q, Z, -1.0)
        cert = _certify(Z, res_norm, res_scale, A - S @ Z, gate, margin)
        return (Z, cert) if cert is not None else None

    if z_init is not None:
        refined = _newton_refine(A, S, Q, z_init, sign=-1.0)
        if refined is not None:
            out = validate(refined)
            if out is not None:
                return out

    try:
        Z = sla.solve_continuous_are(A, B, Q, R_ctrl)
    except (sla.LinAlgError, np.linalg.LinAlgError, ValueError) as exc:
        raise NotStabilizable(f"minimizing Riccati solve failed: {exc}") from exc
    out = validate(Z)
    if out is None:
        refined = _newton_refine(A, S, Q, Z, sign=-1.0)
        out = validate(refined) if refined is not None else None
    if out is None:
        raise LqDeceiveError("minimizing Riccati solve did not certify")
    return out


def _pbh_rank_ok(A: np.ndarray, B: np.ndarray, lam: complex) -> bool:
    n = A.shape[0]
    pencil = np.hstack([A - lam * np.eye(n), B.astype(complex)])
    scale = max(1.0, np.linalg.norm(A, "fro") + np.linalg.norm(B, "fro"))
    smin = np.linalg.svd(pencil, compute_uv=False).min()
    return bool(smin > 1e-9 * scale)


def is_stabilizable(A, B) -> bool:
    """PBH test: every eigenvalue with nonnegative real part is controllable."""
    A = as_square(A, "A")
    B = as_matrix(B, "B", rows=A.shape[0])
    for lam in np.linalg.eigvals(A):
        if lam.real >= -1e-12 and not _pbh_rank_ok(A, B, lam):
            return False
    return True


def is_controllable(A, B) -> bool:
    """PBH test over the whole spectrum."""
    A = as_square(A, "A")
    B = as_matrix(B, "B", rows=A.shape[0])
    return all(_pbh_rank_ok(A, B, lam) for lam in np.linalg.eigvals(A))
