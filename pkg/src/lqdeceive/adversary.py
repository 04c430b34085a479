"""Simulated adversary learners on the spoofed plant.

Whatever learning algorithm the adversary runs, it sees trajectories of the
spoofed dynamics and therefore converges to the gain predicted by the
spoofed Riccati equation.  Two representative learners cover the two
information patterns:

* ``kleinman_pi_max`` -- model-based policy iteration (the learner knows the
  attack channel): alternate a policy-evaluation Lyapunov solve with a
  greedy improvement.
* ``datadriven_pi`` -- off-policy integral policy iteration from measured
  state/attack samples only: both the value matrix and the improved gain are
  estimated jointly by least squares over integral temporal-difference
  constraints, so neither the state matrix nor the attack channel is needed.

Simulation uses fixed-step RK4 for determinism; excitation is a seeded sum
of sinusoids on the attack channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import matsolve
from .deception import Plant, AdversaryObjective
from .errors import Blowup, PolicyDestabilized, RankDeficientData, ShapeMismatch
from .matsolve import as_matrix, spectral_abscissa

__all__ = [
    "TrajectorySpec",
    "Trajectory",
    "LearnerTrace",
    "required_frequency_count",
    "simulate_trajectory",
    "kleinman_pi_max",
    "datadriven_pi",
]

BLOWUP_NORM = 1e12

# Excitation frequency band in rad/s.
FREQ_LOW = 0.1
FREQ_HIGH = 50.0


def required_frequency_count(n: int, m_a: int) -> int:
    """Distinct frequencies needed for a persistently exciting regressor."""
    return n * (n + 1) // 2 + n * m_a


@dataclass(frozen=True)
class TrajectorySpec:
    """Simulation window: initial state, horizon, step and seeded excitation."""

    x0: np.ndarray
    horizon: float
    dt: float = 1e-3
    seed: int = 0
    excitation_amplitude: float = 1.0
    num_frequencies: Optional[int] = None

    def __post_init__(self):
        x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        if not np.all(np.isfinite(x0)):
            raise ShapeMismatch("x0 contains non-finite entries")
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if not self.horizon > 0.0:
            raise ValueError("horizon must be positive")
        if self.num_frequencies is not None and self.num_frequencies < 1:
            raise ValueError("num_frequencies must be positive when given")
        object.__setattr__(self, "x0", x0)


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray  # (N+1, n) states
    a: np.ndarray  # (N+1, m_a) applied attack-channel inputs


@dataclass
class LearnerTrace:
    """Per-iteration learned gains and distances to the reference gain."""

    iterations: list  # list of (K_j, ||K_j - K_ref||_F)
    converged: bool
    reference: np.ndarray
    values: list = field(default_factory=list)  # value-matrix estimates per step
    reason: Optional[str] = None

    @property
    def final_gain(self) -> np.ndarray:
        return self.iterations[-1][0]

    @property
    def distances(self) -> list:
        return [d for _, d in self.iterations]


class _Excitation:
    """Seeded sum of sinusoids with distinct frequencies, one bank per channel."""

    def __init__(self, m_a: int, count: int, seed: int, amplitude: float):
        rng = np.random.default_rng(seed)
        self.freqs = np.sort(rng.uniform(FREQ_LOW, FREQ_HIGH, count))
        self.phases = rng.uniform(0.0, 2.0 * np.pi, (m_a, count))
        weights = rng.uniform(0.5, 1.0, (m_a, count))
        self.amps = amplitude * weights / max(count, 1)

    def __call__(self, t: float) -> np.ndarray:
        return np.sum(self.amps * np.sin(self.freqs * t + self.phases), axis=1)


def _make_excitation(plant: Plant, spec: TrajectorySpec) -> _Excitation:
    count = spec.num_frequencies
    if count is None:
        count = 2 * required_frequency_count(plant.n, plant.m_a)
    return _Excitation(plant.m_a, count, spec.seed, spec.excitation_amplitude)


def simulate_trajectory(plant: Plant, Lambda, attack_gain,
                        spec: TrajectorySpec) -> Trajectory:
    """Fixed-step RK4 simulation of the spoofed loop under a feedback attack.

    Dynamics: ``x' = (A + B_u Lambda + B_a K) x + B_a e(t)`` where ``e`` is
    the seeded excitation added on the attack channel.  The recorded attack
    input is ``a = K x + e``.  Deterministic given the spec seed.

    Raises Blowup when the state norm exceeds 1e12.
    """
    Lambda = as_matrix(Lambda, "Lambda", rows=plant.m_u, cols=plant.n)
    K = as_matrix(attack_gain, "attack_gain", rows=plant.m_a, cols=plant.n)
    if spec.x0.shape[0] != plant.n:
        raise ShapeMismatch("x0 must match the state dimension")
    exc = _make_excitation(plant, spec)
    A_cl = plant.A + plant.B_u @ Lambda + plant.B_a @ K
    B_a = plant.B_a
    dt = spec.dt
    steps = int(round(spec.horizon / dt))
    t = np.arange(steps + 1) * dt
    x = np.empty((steps + 1, plant.n))
    a = np.empty((steps + 1, plant.m_a))
    x[0] = spec.x0

    def f(tk, xk):
        return A_cl @ xk + B_a @ exc(tk)

    for k in range(steps):
        tk = t[k]
        xk = x[k]
        k1 = f(tk, xk)
        k2 = f(tk + 0.5 * dt, xk + 0.5 * dt * k1)
        k3 = f(tk + 0.5 * dt, xk + 0.5 * dt * k2)
        k4 = f(tk + dt, xk + dt * k3)
        x[k + 1] = xk + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if np.linalg.norm(x[k + 1]) > BLOWUP_NORM:
            raise Blowup(f"state norm exceeded {BLOWUP_NORM:g} at t={t[k + 1]:.3f}")
    for k in range(steps + 1):
        a[k] = K @ x[k] + exc(t[k])
    return Trajectory(t=t, x=x, a=a)


def _policy_value(A_s, B_a, Q, R, K):
    """Policy-evaluation solve: value of playing the fixed attack gain K."""
    A_cl = A_s + B_a @ K
    C = Q - K.T @ R @ K
    return matsolve.solve_lyapunov(A_cl, C, margin=0.0)


def kleinman_pi_max(plant: Plant, Lambda, objective: AdversaryObjective,
                    K0=None, tol: float = 1e-10, max_iter: int = 200) -> LearnerTrace:
    """Model-based policy iteration toward the spoofed attack gain.

    Repeats the policy-evaluation Lyapunov solve and the greedy improvement
    ``K_{j+1} = R^-1 B_a^T P_j``.  The maximizing problem carries no global
    convergence guarantee, so loss of closed-loop stability after an
    improvement is detected and reported on the trace instead of raised; a
    destabilizing *initial* policy violates the precondition and raises.
    """
    Lambda = as_matrix(Lambda, "Lambda", rows=plant.m_u, cols=plant.n)
    A_s = plant.A + plant.B_u @ Lambda
    Q, R = objective.Q, objective.R
    K = (np.zeros((plant.m_a, plant.n)) if K0 is None
         else as_matrix(K0, "K0", rows=plant.m_a, cols=plant.n))
    if spectral_abscissa(A_s + plant.B_a @ K) >= 0.0:
        raise PolicyDestabilized("initial policy must keep the spoofed loop Hurwitz")

    P_ref, _ = matsolve.solve_are_max(A_s, plant.B_a, Q, R)
    K_ref = np.linalg.solve(R, plant.B_a.T @ P_ref)

    def dist(Kj):
        return float(np.linalg.norm(Kj - K_ref, "fro"))

    trace = LearnerTrace(iterations=[(K, dist(K))], converged=False, reference=K_ref)
    for _ in range(max_iter):
        K = trace.iterations[-1][0]
        P = _policy_value(A_s, plant.B_a, Q, R, K)
        trace.values.append(P)
        K_next = np.linalg.solve(R, plant.B_a.T @ P)
        if spectral_abscissa(A_s + plant.B_a @ K_next) >= 0.0:
            trace.reason = "improvement step left the stabilizing set"
            break
        trace.iterations.append((K_next, dist(K_next)))
        if np.linalg.norm(K_next - K, "fro") < tol:
            trace.converged = True
            break
    return trace


def _sym_basis(x: np.ndarray, iu):
    """Quadratic-form coordinates: x^T P x = basis(x) . vech(P)."""
    outer = x[..., :, None] * x[..., None, :]
    weights = np.where(iu[0] == iu[1], 1.0, 2.0)
    return outer[..., iu[0], iu[1]] * weights


def datadriven_pi(plant: Plant, Lambda, objective: AdversaryObjective,
                  spec: TrajectorySpec, K0=None, tol: float = 1e-6,
                  max_policy_iter: int = 60, window: float = 0.05,
                  behavior_gain=None) -> LearnerTrace:
    """Off-policy integral policy iteration from spoofed-plant data only.

    One exploratory trajectory is collected with the behavior attack
    ``a = K_b x + e``; the learner then iterates on that fixed dataset.  For
    each policy ``K_j`` the integral temporal-difference identity

        x^T P_j x |_(t0..t1) = -int x^T (Q - K_j^T R K_j) x
                               + 2 int (a - K_j x)^T R K_{j+1} x

    is stacked over windows and solved jointly for ``vech(P_j)`` and
    ``K_{j+1}`` by least squares.  Neither the state matrix nor the attack
    channel enters: the learner only needs x, a and its own weights.

    Raises RankDeficientData when the regressor is numerically rank
    deficient (insufficient excitation); loss of stabilization after an
    improvement is reported on the trace.
    """
    Lambda = as_matrix(Lambda, "Lambda", rows=plant.m_u, cols=plant.n)
    n, m_a = plant.n, plant.m_a
    Q, R = objective.Q, objective.R
    K_b = (np.zeros((m_a, n)) if behavior_gain is None
           else as_matrix(behavior_gain, "behavior_gain", rows=m_a, cols=n))
    count = spec.num_frequencies
    if count is not None and count < required_frequency_count(n, m_a):
        raise ValueError(
            f"num_frequencies must be at least {required_frequency_count(n, m_a)}")

    traj = simulate_trajectory(plant, Lambda, K_b, spec)
    x, a, t = traj.x, traj.a, traj.t

    p = n * (n + 1) // 2
    q = n * m_a
    unknowns = p + q
    stride = max(int(round(window / spec.dt)), 1)
    ends = np.arange(stride, len(t), stride)
    starts = ends - stride
    if len(ends) < unknowns:
        raise RankDeficientData(
            f"{len(ends)} windows available for {unknowns} unknowns; "
            "extend the horizon or shrink the window")

    iu = np.triu_indices(n)
    basis = _sym_basis(x, iu)                               # (N+1, p)
    xx = x[:, :, None] * x[:, None, :]                      # (N+1, n, n)
    ax = a[:, :, None] * x[:, None, :]                      # (N+1, m_a, n)
    cum_xx = np.concatenate([np.zeros((1, n, n)),
                             cumulative_trapezoid(xx, t, axis=0)])
    cum_ax = np.concatenate([np.zeros((1, m_a, n)),
                             cumulative_trapezoid(ax, t, axis=0)])

    delta_basis = basis[ends] - basis[starts]               # (W, p)
    I_xx = cum_xx[ends] - cum_xx[starts]                    # (W, n, n)
    I_ax = cum_ax[ends] - cum_ax[starts]                    # (W, m_a, n)

    A_s = plant.A + plant.B_u @ Lambda
    P_ref, _ = matsolve.solve_are_max(A_s, plant.B_a, Q, R)
    K_ref = np.linalg.solve(R, plant.B_a.T @ P_ref)

    def dist(Kj):
        return float(np.linalg.norm(Kj - K_ref, "fro"))

    K = (np.zeros((m_a, n)) if K0 is None
         else as_matrix(K0, "K0", rows=m_a, cols=n))
    trace = LearnerTrace(iterations=[(K, dist(K))], converged=False, reference=K_ref)

    for _ in range(max_policy_iter):
        K = trace.iterations[-1][0]
        # regressor columns: vech(P) then vec(K_next)
        resid_int = I_ax - np.einsum("ij,wjk->wik", K, I_xx)   # int (a - K x) x^T
        gain_cols = -2.0 * np.einsum("ij,wjk->wik", R, resid_int).reshape(len(ends), q)
        Phi = np.hstack([delta_basis, gain_cols])
        M = Q - K.T @ R @ K
        rhs = -np.einsum("wij,ji->w", I_xx, M)
        sv = np.linalg.svd(Phi, compute_uv=False)
        if sv[-1] <= 1e-8 * sv[0]:
            raise RankDeficientData(
                "integral regressor is numerically rank deficient; "
                "increase excitation or the number of windows")
        theta, *_ = np.linalg.lstsq(Phi, rhs, rcond=None)
        P_est = np.zeros((n, n))
        P_est[iu] = theta[:p]
        P_est = P_est + P_est.T - np.diag(np.diag(P_est))
        K_next = theta[p:].reshape(m_a, n)
        trace.values.append(P_est)
        if spectral_abscissa(A_s + plant.B_a @ K_next) >= 0.0:
            trace.reason = "improvement step left the stabilizing set"
            break
        trace.iterations.append((K_next, dist(K_next)))
        if np.linalg.norm(K_next - K, "fro") < tol * max(1.0, np.linalg.norm(K, "fro")):
            trace.converged = True
            break
    return trace
