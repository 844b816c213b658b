"""Monte Carlo estimation over independent trajectories.

Trajectory i always uses the rng stream (master_seed, i), and aggregation runs
in sample order with a streaming Welford accumulator, so the result is
bit-identical for any worker count and needs memory proportional to the output
grid, not the sample count.
"""

from __future__ import annotations

import multiprocessing
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .model import Scenario
from .trajectory import TrajectoryRecord, simulate_trajectory

__all__ = ["EnsembleStats", "run_ensemble", "estimate_moments", "repair_count_histogram"]

_OBSERVABLES = ("w", "capacity", "q", "outflow_density")


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """Time-indexed sample means with standard errors plus the repair-count distribution."""

    sample_times: np.ndarray
    mean_w: np.ndarray
    stderr_w: np.ndarray
    mean_capacity: np.ndarray
    stderr_capacity: np.ndarray
    mean_q: np.ndarray
    stderr_q: np.ndarray
    mean_outflow_density: np.ndarray
    stderr_outflow_density: np.ndarray
    repair_histogram: dict[int, float]
    n_samples: int
    master_seed: int


class _MomentAccumulator:
    """Streaming Welford mean/variance per observable per time point."""

    def __init__(self, sample_times: np.ndarray):
        self.sample_times = sample_times
        self.count = 0
        shape = sample_times.shape
        self._mean = {name: np.zeros(shape) for name in _OBSERVABLES}
        self._m2 = {name: np.zeros(shape) for name in _OBSERVABLES}

    def update(self, record: TrajectoryRecord) -> None:
        if not np.array_equal(record.sample_times, self.sample_times):
            raise ValueError("all records must share one sample-time grid")
        self.count += 1
        for name, series in (
            ("w", record.w_series),
            ("capacity", record.capacity_series),
            ("q", record.q_series),
            ("outflow_density", record.outflow_density_series),
        ):
            mean, m2 = self._mean[name], self._m2[name]
            delta = series - mean
            mean += delta / self.count
            m2 += delta * (series - mean)

    def mean(self, name: str) -> np.ndarray:
        return self._mean[name].copy()

    def stderr(self, name: str) -> np.ndarray:
        if self.count < 2:
            return np.zeros_like(self._m2[name])
        return np.sqrt(self._m2[name] / (self.count * (self.count - 1)))


def estimate_moments(records: Iterable[TrajectoryRecord]) -> dict[str, np.ndarray]:
    """Per-time sample means and standard errors in one streaming pass.

    Returns a dict with sample_times and mean_* / stderr_* arrays for the four
    observables. Raises on an empty collection.
    """
    acc = None
    for record in records:
        if acc is None:
            acc = _MomentAccumulator(record.sample_times)
        acc.update(record)
    if acc is None:
        raise ValueError("estimate_moments needs at least one record")
    out: dict[str, np.ndarray] = {"sample_times": acc.sample_times}
    for name in _OBSERVABLES:
        out[f"mean_{name}"] = acc.mean(name)
        out[f"stderr_{name}"] = acc.stderr(name)
    return out


def repair_count_histogram(records: Iterable[TrajectoryRecord]) -> dict[int, float]:
    """Relative frequency of each observed repair count; frequencies sum to 1."""
    counts: Counter[int] = Counter()
    n = 0
    for record in records:
        counts[record.repair_count] += 1
        n += 1
    if n == 0:
        raise ValueError("repair_count_histogram needs at least one record")
    return {k: counts[k] / n for k in sorted(counts)}


_POOL_SCENARIO: Scenario | None = None
_POOL_SEED: int | None = None


def _init_pool(scenario: Scenario, master_seed: int) -> None:
    global _POOL_SCENARIO, _POOL_SEED
    _POOL_SCENARIO = scenario
    _POOL_SEED = master_seed


def _pool_sample(index: int) -> TrajectoryRecord:
    try:
        return simulate_trajectory(_POOL_SCENARIO, (_POOL_SEED, index))
    except Exception as exc:  # keep the failing sample index in the message
        raise RuntimeError(f"trajectory sample {index} failed: {exc}") from exc


def _iter_records(scenario: Scenario, n: int, master_seed: int, workers: int) -> Iterator[TrajectoryRecord]:
    if workers == 1:
        for index in range(n):
            try:
                yield simulate_trajectory(scenario, (master_seed, index))
            except Exception as exc:
                raise RuntimeError(f"trajectory sample {index} failed: {exc}") from exc
        return
    chunksize = max(1, min(64, n // (workers * 4) or 1))
    with multiprocessing.Pool(
        workers, initializer=_init_pool, initargs=(scenario, master_seed)
    ) as pool:
        yield from pool.imap(_pool_sample, range(n), chunksize=chunksize)


def run_ensemble(
    scenario: Scenario, n: int, master_seed: int, workers: int = 1
) -> EnsembleStats:
    """Run n independent trajectories and aggregate their statistics.

    workers > 1 parallelizes trajectory generation across processes; imap keeps
    the aggregation order fixed by sample index, so any worker count gives a
    bit-identical result.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    acc = _MomentAccumulator(scenario.sample_times())
    counts: Counter[int] = Counter()
    for record in _iter_records(scenario, n, master_seed, workers):
        acc.update(record)
        counts[record.repair_count] += 1
    histogram = {k: counts[k] / n for k in sorted(counts)}
    return EnsembleStats(
        sample_times=acc.sample_times,
        mean_w=acc.mean("w"),
        stderr_w=acc.stderr("w"),
        mean_capacity=acc.mean("capacity"),
        stderr_capacity=acc.stderr("capacity"),
        mean_q=acc.mean("q"),
        stderr_q=acc.stderr("q"),
        mean_outflow_density=acc.mean("outflow_density"),
        stderr_outflow_density=acc.stderr("outflow_density"),
        repair_histogram=histogram,
        n_samples=n,
        master_seed=master_seed,
    )
