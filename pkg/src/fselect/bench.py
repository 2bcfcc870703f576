"""Wall-clock timing of feature selection across worker counts."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .dataset import DiscreteDataset
from .engine import EngineConfig, ParallelEngine
from .selector import Objective, select

__all__ = ["Timing", "TimingReport", "measure", "run_bench"]


@dataclass
class Timing:
    workers: int
    samples: list[float]

    @property
    def median_seconds(self) -> float:
        return statistics.median(self.samples)


@dataclass
class TimingReport:
    rows: list[Timing]
    r: int
    m: int
    C: int
    k: int
    calls: list[int] = field(default_factory=list)
    ranking: list[int] = field(default_factory=list)

    @property
    def speedup(self) -> dict[int, float]:
        """Median time at workers=1 (or the first row) over each row's median."""
        base = next((t for t in self.rows if t.workers == 1), self.rows[0])
        return {t.workers: base.median_seconds / t.median_seconds for t in self.rows}


def measure(run: Callable[[], object], repeats: int = 3, workers: int = 1) -> Timing:
    """Time ``run()`` ``repeats`` times with a monotonic wall clock."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        run()
        samples.append(time.perf_counter() - t0)
    return Timing(workers, samples)


def run_bench(
    data: DiscreteDataset,
    worker_counts: Sequence[int],
    repeats: int = 3,
    objective: Objective = Objective(),
    k: int | None = None,
    par_threshold: int = 64,
) -> TimingReport:
    """Time a full :func:`select` per worker count (data preparation excluded).

    Each worker count gets its own engine whose pool is warmed up before
    timing.  The association-test count and ranking from every configuration
    are recorded so callers can check that the work done is identical.
    """
    if not worker_counts:
        raise ValueError("worker_counts must be non-empty")
    worker_counts = list(dict.fromkeys(int(w) for w in worker_counts))
    k = data.m if k is None else k
    rows, calls, ranking = [], [], None
    # compile kernels outside the timed region
    with ParallelEngine(EngineConfig(1, par_threshold)) as warm:
        select(data, objective, min(2, k), warm)
    for w in worker_counts:
        with ParallelEngine(EngineConfig(w, par_threshold)) as engine:
            if w > 1:
                engine._executor()
            results = []

            def run():
                engine.reset_counters()
                results.append(select(data, objective, k, engine))

            rows.append(measure(run, repeats, w))
            calls.append(engine.calls)
            indices = results[-1].indices
            if ranking is None:
                ranking = indices
            elif indices != ranking:
                raise RuntimeError(f"ranking with {w} workers differs from the first configuration")
    return TimingReport(rows, data.r, data.m, data.C, k, calls, ranking)
