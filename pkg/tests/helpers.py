"""Shared instance builders for the suite."""

from __future__ import annotations

import numpy as np

from qbandit import BanditInstance

# success mass below P_MIN leaves nothing to amplify; inside (1 - P_BAND, 1)
# the closed form divides by a vanishing 1 - p, so the generator resamples
P_MIN = 1e-4
P_BAND = 1e-9


def four_arm_exact() -> BanditInstance:
    """Single-outcome arms with values (1, 0, 0, 0): p = 1/4 under uniform alpha."""
    return BanditInstance(nu=np.ones((4, 1)), f=np.array([[1], [0], [0], [0]]))


def two_arm_stochastic() -> BanditInstance:
    """Two fair-coin arms with values (0.5, 0): p = 1/4 under uniform alpha."""
    return BanditInstance(
        nu=np.array([[0.5, 0.5], [0.5, 0.5]]),
        f=np.array([[1, 0], [0, 0]]),
    )


def random_instance(
    rng: np.random.Generator, *, n_max: int = 8, m_max: int = 8
) -> tuple[BanditInstance, np.ndarray | None]:
    """A random instance plus arm amplitudes (None means uniform).

    Resamples until the success mass sits in [P_MIN, 1 - P_BAND], except that
    an all-rewarded table (p = 1 exactly, a fixed point of amplification) is
    kept as its own worthwhile case.
    """
    while True:
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        nu = rng.dirichlet(np.ones(m), size=n)
        f = (rng.random((n, m)) < 0.5).astype(int)
        if rng.random() < 0.5:
            alpha = None
            weights = np.full(n, 1.0 / n)
        else:
            raw = rng.normal(size=n) + 1j * rng.normal(size=n)
            alpha = raw / np.linalg.norm(raw)
            weights = np.abs(alpha) ** 2
        p = float(weights @ (nu * f).sum(axis=1))
        if f.all() or P_MIN <= p <= 1.0 - P_BAND:
            return BanditInstance(nu=nu, f=f), alpha
