"""Classical baseline: environment sampling and the UCB-E exploration policy.

The policy pulls every arm once, then pulls the arm maximizing an optimism
bonus on top of the empirical mean.  The default bonus sqrt(explore / pulls_x)
shrinks per arm with its pull count, matching the Hoeffding radius the
analysis needs; bonus="printed" selects the round-wide sqrt(explore / (t - 1))
form instead, which shifts every score equally and so degenerates to the
greedy choice.

Randomness policy: every consumer derives a fresh generator from an explicit
(seed, stream) pair, one uniform draw per round, so any trial can be replayed
in isolation and results cannot depend on scheduling or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bandits import BanditInstance, InstanceSummary, summarize
from .errors import InsufficientBudget

BONUS_VARIANTS = ("per-arm", "printed")
# trials processed per lockstep block; bounds the uniforms matrix footprint
DEFAULT_CHUNK = 2500


@dataclass(frozen=True)
class RngStream:
    """A named random stream: (seed, stream) pins the whole draw sequence."""

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        if self.seed < 0 or self.stream < 0:
            raise ValueError("seed and stream must be non-negative")

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class UcbeTrace:
    """One episode: pull counts, empirical means, and the final recommendation."""

    T: int
    pulls: np.ndarray
    means: np.ndarray
    rewards_total: int
    recommendation: int


def sample_env(
    inst: BanditInstance, x: int, rng: np.random.Generator
) -> tuple[int, int]:
    """Draw one (outcome, reward) pair from arm x by inverse CDF on one uniform.

    rng is a live generator, e.g. RngStream(seed, stream).generator().
    """
    if not (0 <= x < inst.n_arms):
        raise ValueError(f"arm index {x} outside range [0, {inst.n_arms})")
    cdf = np.cumsum(inst.nu[x])
    u = rng.random()
    y = min(int(np.searchsorted(cdf, u, side="right")), inst.n_env - 1)
    return y, int(inst.f[x, y])


def tuned_explore(summary: InstanceSummary, T: int) -> float:
    """Default exploration strength (25/36) * (T - N) / h1."""
    n = len(summary.a)
    if T < n:
        raise InsufficientBudget(f"budget T={T} below arm count N={n}")
    if summary.h1 == 0.0:
        return 0.0
    return (25.0 / 36.0) * (T - n) / summary.h1


def run_ucbe(
    inst: BanditInstance,
    T: int,
    explore: float,
    rng: RngStream,
    *,
    bonus: str = "per-arm",
) -> UcbeTrace:
    """One UCB-E episode of T rounds; bit-for-bit reproducible from (seed, stream)."""
    if bonus not in BONUS_VARIANTS:
        raise ValueError(f"bonus must be one of {BONUS_VARIANTS}, got {bonus!r}")
    if explore < 0:
        raise ValueError(f"explore must be non-negative, got {explore}")
    n, m = inst.n_arms, inst.n_env
    if T < n:
        raise InsufficientBudget(f"budget T={T} below arm count N={n}")
    cdf = np.cumsum(inst.nu, axis=1)
    gen = rng.generator()
    sums = np.zeros(n)
    pulls = np.zeros(n, dtype=np.int64)
    total = 0
    for t in range(T):
        if t < n:
            x = t
        elif bonus == "per-arm":
            x = int(np.argmax(sums / pulls + np.sqrt(explore / pulls)))
        else:
            # round-wide bonus shifts every score equally; compare means only
            x = int(np.argmax(sums / pulls))
        u = gen.random()
        y = min(int(np.searchsorted(cdf[x], u, side="right")), m - 1)
        r = int(inst.f[x, y])
        sums[x] += r
        pulls[x] += 1
        total += r
    means = sums / pulls
    means.setflags(write=False)
    pulls.setflags(write=False)
    return UcbeTrace(
        T=int(T),
        pulls=pulls,
        means=means,
        rewards_total=int(total),
        recommendation=int(np.argmax(means)),
    )


def _episode_recommendations(
    inst: BanditInstance,
    T: int,
    explore: float,
    rng: RngStream,
    start: int,
    count: int,
    bonus: str,
) -> np.ndarray:
    """Recommendations of trials [start, start + count) run in lockstep.

    Trial i consumes stream rng.stream + i, one uniform per round in round
    order, exactly like run_ucbe on that stream; results match it bit for bit.
    """
    n, m = inst.n_arms, inst.n_env
    uniforms = np.empty((count, T))
    for i in range(count):
        child = RngStream(rng.seed, rng.stream + start + i)
        uniforms[i] = child.generator().random(T)
    cdf = np.cumsum(inst.nu, axis=1)
    sums = np.zeros((count, n))
    pulls = np.zeros((count, n), dtype=np.int64)
    rows = np.arange(count)
    for t in range(T):
        if t < n:
            arms = np.full(count, t)
        elif bonus == "per-arm":
            arms = np.argmax(sums / pulls + np.sqrt(explore / pulls), axis=1)
        else:
            arms = np.argmax(sums / pulls, axis=1)
        u = uniforms[:, t]
        y = np.minimum((cdf[arms] <= u[:, None]).sum(axis=1), m - 1)
        r = inst.f[arms, y]
        sums[rows, arms] += r
        pulls[rows, arms] += 1
    return np.argmax(sums / pulls, axis=1)


def estimate_error(
    inst: BanditInstance,
    T: int,
    explore: float,
    trials: int,
    rng: RngStream,
    *,
    bonus: str = "per-arm",
    chunk: int = DEFAULT_CHUNK,
) -> tuple[float, float]:
    """Monte Carlo misidentification rate and its 95% half-width.

    Trial i uses stream rng.stream + i, so the estimate is reproducible and
    independent of chunking.  Episodes are run in vectorized lockstep; each
    one is draw-for-draw identical to run_ucbe on its own stream.
    """
    if bonus not in BONUS_VARIANTS:
        raise ValueError(f"bonus must be one of {BONUS_VARIANTS}, got {bonus!r}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    if explore < 0:
        raise ValueError(f"explore must be non-negative, got {explore}")
    if T < inst.n_arms:
        raise InsufficientBudget(f"budget T={T} below arm count N={inst.n_arms}")
    x_star = summarize(inst).x_star
    wrong = 0
    for start in range(0, trials, chunk):
        count = min(chunk, trials - start)
        recs = _episode_recommendations(inst, T, explore, rng, start, count, bonus)
        wrong += int((recs != x_star).sum())
    e_hat = wrong / trials
    ci = 1.96 * math.sqrt(e_hat * (1.0 - e_hat) / trials)
    return e_hat, ci


def ucbe_error_bound(summary: InstanceSummary, T: int) -> float:
    """Misidentification bound 2*T*N*exp(-(T - N) / (18*h1)) for tuned explore."""
    n = len(summary.a)
    if T <= n:
        raise ValueError(f"bound needs T > N, got T={T}, N={n}")
    if summary.h1 == 0.0:
        return 0.0
    return 2.0 * T * n * math.exp(-(T - n) / (18.0 * summary.h1))


def ucbe_min_rounds(summary: InstanceSummary, delta: float) -> int:
    """Smallest round budget whose bound guarantees error below delta.

    This is the smallest integer strictly greater than
    18 * h1 * ln(2N / delta) + N.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    n = len(summary.a)
    return math.floor(18.0 * summary.h1 * math.log(2.0 * n / delta) + n) + 1
