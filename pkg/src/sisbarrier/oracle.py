"""Monte Carlo lifecycle simulation of a MooN barrier under proof testing.

Each element carries two competing exponential failure processes: modes a
partial test can reveal (rate E*lambda) and modes only the full test
reveals (rate (1-E)*lambda). Revealed failures are repaired instantly at
each partial-test instant; everything is renewed at T1. This mode split is
what makes the simulated element unavailability equal
``1 - exp(-lambda*t + E*lambda*p*T0)``; detecting each failure with
probability E at every test would not.

Trials are split into batches. Batch ``b`` of quantity ``q`` draws from its
own stream seeded by ``(seed, q, b)``, and batch tallies merge by plain
summation in batch order, so results depend only on (inputs, config).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, OracleError
from .model import Architecture, BarrierSpec, TestPolicy

_PFD_STREAM = 0
_PFH_STREAM = 1
ONE_HOUR = 1.0


@dataclass(frozen=True)
class SimulationConfig:
    trials: int
    seed: int = 0
    grid_points: int = 21
    batch_size: int = 200_000
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.grid_points < 2:
            raise DomainError("grid_points must be >= 2")
        if self.batch_size < 1 or self.workers < 1:
            raise DomainError("batch_size and workers must be >= 1")

    def batch_sizes(self) -> list[int]:
        full, rest = divmod(self.trials, self.batch_size)
        return [self.batch_size] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    trials: int

    def within(self, expected: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - expected) <= sigmas * self.std_error


def _bernoulli(hits: int, trials: int) -> Estimate:
    p = hits / trials
    return Estimate(p, math.sqrt(p * (1.0 - p) / trials), trials)


def _exponential(rng: np.random.Generator, rate: float, size) -> np.ndarray:
    if rate <= 0.0:
        return np.full(size, np.inf)
    return rng.standard_exponential(size) / rate


def simulate_element_history(
    failure_rate: float,
    coverage: float,
    policy: TestPolicy,
    rng: np.random.Generator,
    size=(),
) -> np.ndarray:
    """Sample failure-onset times of elements over one full-test period.

    Returns an array of shape ``size + (n,)`` where entry ``p`` is the time
    at which the element goes down within segment ``p`` (the interval
    starting at the p-th partial test). The element is up in segment ``p``
    strictly before that time and down from it until the next test; values
    past the segment end mean it survives the segment.
    """
    if failure_rate < 0:
        raise DomainError("failure rate must be nonnegative")
    if not 0.0 <= coverage <= 1.0:
        raise DomainError("coverage must lie in [0, 1]")
    size = (size,) if isinstance(size, int) else tuple(size)
    n = policy.partial_test_count
    t0 = policy.partial_period_hours
    starts = t0 * np.arange(n)
    hidden = _exponential(rng, (1.0 - coverage) * failure_rate, size + (1,))
    revealed = starts + _exponential(rng, coverage * failure_rate, size + (n,))
    return np.maximum(starts, np.minimum(hidden, revealed))


def _simulate_barrier(arch: Architecture, failure_rate: float, policy: TestPolicy, rng, trials: int):
    # shape (trials, N, n)
    return simulate_element_history(
        failure_rate, policy.partial_coverage, policy, rng, (trials, arch.n_elements)
    )


# float64 onset entries held at once per chunk
_CHUNK_CELLS = 4_000_000


def _chunks(arch: Architecture, policy: TestPolicy, trials: int):
    step = max(1, _CHUNK_CELLS // (arch.n_elements * policy.partial_test_count))
    for lo in range(0, trials, step):
        yield min(step, trials - lo)


def _segment_of(policy: TestPolicy, t: np.ndarray) -> np.ndarray:
    p = np.floor(t / policy.partial_period_hours).astype(np.int64)
    return np.clip(p, 0, policy.partial_test_count - 1)


@dataclass
class PfdTally:
    """Per-batch downtime sums are kept apart and combined with fsum, which
    is correctly rounded, so any grouping of batches gives identical totals."""

    trials: int = 0
    down_at_grid: Optional[np.ndarray] = None
    downtime_parts: tuple[float, ...] = ()
    downtime_sq_parts: tuple[float, ...] = ()

    @property
    def downtime_sum(self) -> float:
        return math.fsum(self.downtime_parts)

    @property
    def downtime_sumsq(self) -> float:
        return math.fsum(self.downtime_sq_parts)

    def merge(self, other: "PfdTally") -> "PfdTally":
        if self.down_at_grid is None:
            grid = other.down_at_grid
        elif other.down_at_grid is None:
            grid = self.down_at_grid
        else:
            grid = self.down_at_grid + other.down_at_grid
        return PfdTally(
            self.trials + other.trials,
            grid,
            self.downtime_parts + other.downtime_parts,
            self.downtime_sq_parts + other.downtime_sq_parts,
        )


@dataclass(frozen=True)
class PfdSimulation:
    times: tuple[float, ...]
    curve: tuple[Estimate, ...]
    average: Estimate


def grid_times(t1: float, grid_points: int) -> np.ndarray:
    """Uniform grid over [0, T1] including both ends; T1 is the pre-test limit."""
    return t1 * np.arange(grid_points) / (grid_points - 1)


def _pfd_batch(arch, failure_rate, policy, times, seed, batch, trials) -> PfdTally:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_PFD_STREAM, batch)))
    tolerated = arch.n_elements - arch.m_required
    segments = [policy.segment_index(float(t)) for t in times]
    # a grid time snapped onto a test instant counts as lying in the new segment
    times = [max(float(t), p * policy.partial_period_hours) for t, p in zip(times, segments)]
    ends = policy.partial_period_hours * np.arange(1, policy.partial_test_count + 1)
    ends[-1] = policy.full_test_period_hours

    down = np.zeros(len(times), dtype=np.int64)
    fractions = []
    for size in _chunks(arch, policy, trials):
        onsets = _simulate_barrier(arch, failure_rate, policy, rng, size)
        for i, (t, p) in enumerate(zip(times, segments)):
            failed = np.count_nonzero(onsets[:, :, p] <= t, axis=1)
            down[i] += np.count_nonzero(failed > tolerated)
        # the barrier fails in a segment when its (N-M+1)-th element does
        barrier_fail = np.partition(onsets, tolerated, axis=1)[:, tolerated, :]
        downtime = np.clip(ends - barrier_fail, 0.0, None).sum(axis=1)
        fractions.append(downtime / policy.full_test_period_hours)
    fraction = np.concatenate(fractions)
    return PfdTally(trials, down, (math.fsum(fraction),), (math.fsum(fraction * fraction),))


def _run_batches(fn, config: SimulationConfig, batches: Optional[list[int]] = None):
    sizes = config.batch_sizes()
    indices = range(len(sizes)) if batches is None else batches
    jobs = [(b, sizes[b]) for b in indices]
    if config.workers == 1:
        return [fn(b, n) for b, n in jobs]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def tally_pfd(
    arch: Architecture,
    failure_rate: float,
    policy: TestPolicy,
    config: SimulationConfig,
    batches: Optional[list[int]] = None,
) -> PfdTally:
    """Run the selected batches (all by default) and merge their tallies in order."""
    times = grid_times(policy.full_test_period_hours, config.grid_points)
    parts = _run_batches(
        lambda b, n: _pfd_batch(arch, failure_rate, policy, times, config.seed, b, n),
        config,
        batches,
    )
    total = PfdTally()
    for part in parts:
        total = total.merge(part)
    return total


def pfd_from_tally(tally: PfdTally, t1: float, grid_points: int) -> PfdSimulation:
    n = tally.trials
    mean = tally.downtime_sum / n
    if n > 1:
        var = max(0.0, (tally.downtime_sumsq - n * mean * mean) / (n - 1))
    else:
        var = 0.0
    average = Estimate(min(1.0, max(0.0, mean)), math.sqrt(var / n), n)
    curve = tuple(_bernoulli(int(k), n) for k in tally.down_at_grid)
    return PfdSimulation(tuple(float(t) for t in grid_times(t1, grid_points)), curve, average)


def simulate_pfd(
    arch: Architecture, failure_rate: float, policy: TestPolicy, config: SimulationConfig
) -> PfdSimulation:
    """PFD(t) on the grid and average PFD for raw parameters (failure_rate may be 0)."""
    tally = tally_pfd(arch, failure_rate, policy, config)
    return pfd_from_tally(tally, policy.full_test_period_hours, config.grid_points)


def estimate_pfd(spec: BarrierSpec, config: SimulationConfig) -> PfdSimulation:
    return simulate_pfd(spec.architecture, spec.failure_rate_per_hour, spec.test_policy, config)


@dataclass
class PfhTally:
    up: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    failed: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def merge(self, other: "PfhTally") -> "PfhTally":
        if self.up.size == 0:
            return other
        if other.up.size == 0:
            return self
        return PfhTally(self.up + other.up, self.failed + other.failed)


def _pfh_batch(arch, failure_rate, policy, strata, seed, batch, trials) -> PfhTally:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_PFH_STREAM, batch)))
    t1 = policy.full_test_period_hours
    tolerated = arch.n_elements - arch.m_required
    up_count = np.zeros(strata, dtype=np.int64)
    fail_count = np.zeros(strata, dtype=np.int64)
    for size in _chunks(arch, policy, trials):
        onsets = _simulate_barrier(arch, failure_rate, policy, rng, size)
        start = rng.uniform(0.0, t1, size)
        rows = np.arange(size)

        def failed_elements(t):
            seg = onsets[rows, :, _segment_of(policy, t)]
            return np.count_nonzero(seg <= t[:, None], axis=1)

        up = failed_elements(start) <= tolerated
        down_after = failed_elements(start + ONE_HOUR) > tolerated
        stratum = np.minimum((start / t1 * strata).astype(np.int64), strata - 1)
        up_count += np.bincount(stratum[up], minlength=strata)
        fail_count += np.bincount(stratum[up & down_after], minlength=strata)
    return PfhTally(up_count, fail_count)


def simulate_pfh(
    arch: Architecture, failure_rate: float, policy: TestPolicy, config: SimulationConfig
) -> Estimate:
    """Average over window starts t ~ U[0, T1] of P(down at t+1h | up at t).

    Window starts are pooled into ``grid_points`` equal strata; the
    conditional probability is estimated per stratum and the strata are
    averaged with equal weight.
    """
    strata = config.grid_points
    parts = _run_batches(
        lambda b, n: _pfh_batch(arch, failure_rate, policy, strata, config.seed, b, n), config
    )
    total = PfhTally()
    for part in parts:
        total = total.merge(part)
    if np.any(total.up == 0):
        empty = int(np.count_nonzero(total.up == 0))
        raise OracleError(
            f"{empty} of {strata} window strata saw no working barrier; "
            "raise trials or lower grid_points"
        )
    p = total.failed / total.up
    mean = float(p.mean())
    se = math.sqrt(float(np.sum(p * (1.0 - p) / total.up))) / strata
    return Estimate(mean, se, config.trials)


def estimate_pfh(spec: BarrierSpec, config: SimulationConfig) -> Estimate:
    return simulate_pfh(spec.architecture, spec.failure_rate_per_hour, spec.test_policy, config)
