"""Shared instance factories for the test suite."""

import numpy as np

from lqdeceive import matsolve
from lqdeceive.deception import AdversaryObjective, DeceptionProblem, Plant


def random_plant(n, m_u, m_a, seed, range_mode=False, margin=2.0, e_scale=0.7):
    """Seeded Hurwitz plant; range_mode builds B_a inside the range of B_u."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    A -= (matsolve.spectral_abscissa(A) + margin) * np.eye(n)
    B_u = rng.standard_normal((n, m_u))
    if range_mode:
        B_a = B_u @ (e_scale * rng.standard_normal((m_u, m_a)))
    else:
        B_a = rng.standard_normal((n, m_a))
    return Plant(A, B_u, B_a)


def random_problem(n, m_u, m_a, seed, range_mode=False, r_scale=10.0,
                   gamma=1e-3, K_bar=None):
    plant = random_plant(n, m_u, m_a, seed, range_mode=range_mode)
    objective = AdversaryObjective(np.eye(n), r_scale * np.eye(m_a))
    if K_bar is None:
        K_bar = np.zeros((m_a, n))
    return DeceptionProblem(plant, objective, K_bar, gamma * np.eye(m_u))


def normalized_instance(seed, n=4, m_u=2, m_a=2, target=0.5, margin=2.0,
                        gamma=1e-4):
    """Range-condition instance with the nominal attack norm pinned to target.

    The attack-channel scale is bisected (deterministically, per seed) until
    ||K*||_F sits just below `target`, which makes suppression levels
    comparable across seeds.
    """
    from lqdeceive.errors import NoStabilizingSolution
    from lqdeceive.deception import nominal_attack

    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    A -= (matsolve.spectral_abscissa(A) + margin) * np.eye(n)
    B_u = rng.standard_normal((n, m_u))
    E = rng.standard_normal((m_u, m_a))
    E /= np.linalg.norm(E)
    objective = AdversaryObjective(np.eye(n), np.eye(m_a))

    def kstar_norm(s):
        try:
            plant = Plant(A, B_u, B_u @ (s * E))
            K, _ = nominal_attack(plant, objective)
            return np.linalg.norm(K, "fro")
        except NoStabilizingSolution:
            return None

    lo, hi = 1e-3, 1e-3
    while True:
        v = kstar_norm(hi)
        if v is None or v >= target:
            break
        lo, hi = hi, 2.0 * hi
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        v = kstar_norm(mid)
        if v is None or v >= target:
            hi = mid
        else:
            lo = mid
    plant = Plant(A, B_u, B_u @ (lo * E))
    return DeceptionProblem(plant, objective, np.zeros((m_a, n)),
                            gamma * np.eye(m_u))


def scalar_plant(a=-1.0, b_u=1.0, b_a=1.0):
    return Plant([[a]], [[b_u]], [[b_a]])


def scalar_problem(r, k_bar, gamma, q=1.0):
    """The scalar benchmark: A=-1, B_u=B_a=1, Q=1."""
    plant = scalar_plant()
    objective = AdversaryObjective([[q]], [[r]])
    return DeceptionProblem(plant, objective, [[k_bar]], [[gamma]])
