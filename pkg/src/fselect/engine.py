"""Fork/join evaluation of independent association tasks.

A batch of candidate features is scored against one partner column
(the class labels, or the feature picked in the previous greedy step).
Small batches run inline on the calling thread; larger ones are split
into contiguous near-equal blocks, one per worker, and the block results
are concatenated in block order.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .association import AssociationValue, cvtest_block
from .dataset import DiscreteDataset

__all__ = [
    "EngineConfig",
    "TaskBatch",
    "ParallelEngine",
    "LABELS",
    "block_bounds",
    "par_fold",
    "default_workers",
]

DEFAULT_PAR_THRESHOLD = 64
ENV_WORKERS = "FSELECT_WORKERS"

# partner sentinel for "score against the class labels"
LABELS = -1


def default_workers() -> int:
    env = os.environ.get(ENV_WORKERS)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{ENV_WORKERS} must be a positive integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"{ENV_WORKERS} must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class EngineConfig:
    workers: int = 1
    par_threshold: int = DEFAULT_PAR_THRESHOLD
    chunking: str = "block"

    def __post_init__(self):
        if int(self.workers) < 1:
            raise ValueError("workers must be >= 1")
        if int(self.par_threshold) < 0:
            raise ValueError("par_threshold must be >= 0")
        if self.chunking != "block":
            raise ValueError("only 'block' chunking is supported")

    @classmethod
    def from_env(cls, workers: int | None = None, par_threshold: int = DEFAULT_PAR_THRESHOLD):
        """Explicit ``workers`` wins over ``FSELECT_WORKERS``, which wins over cpu count."""
        return cls(workers if workers is not None else default_workers(), par_threshold)


@dataclass(frozen=True)
class TaskBatch:
    candidate_indices: np.ndarray
    partner: int = LABELS

    def __post_init__(self):
        idx = np.asarray(self.candidate_indices, dtype=np.int64)
        if idx.ndim != 1 or (idx.size > 1 and np.any(np.diff(idx) <= 0)):
            raise ValueError("candidate_indices must be strictly increasing")
        object.__setattr__(self, "candidate_indices", idx)

    def __len__(self) -> int:
        return self.candidate_indices.size


def block_bounds(n: int, workers: int) -> list[tuple[int, int]]:
    """Contiguous ``[start, stop)`` ranges whose sizes differ by at most one."""
    blocks = min(workers, n)
    if blocks == 0:
        return []
    base, extra = divmod(n, blocks)
    bounds = []
    start = 0
    for b in range(blocks):
        stop = start + base + (1 if b < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


class ParallelEngine:
    """Worker pool plus instrumentation counters.

    The pool is created lazily and reused until :meth:`close`; use the
    engine as a context manager to scope it.  One coordinating thread
    per engine instance.
    """

    def __init__(self, config: EngineConfig | None = None):
        self.config = config or EngineConfig()
        self._pool: ThreadPoolExecutor | None = None
        self._lock = threading.Lock()
        self.calls = 0  # cvtest evaluations
        self.forks = 0  # batches dispatched across workers
        self.inline = 0  # batches evaluated on the coordinator
        self.last_blocks: list[int] = []

    @property
    def workers(self) -> int:
        return self.config.workers

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def reset_counters(self) -> None:
        self.calls = self.forks = self.inline = 0
        self.last_blocks = []

    def _executor(self) -> ThreadPoolExecutor:
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix="fselect")
        return self._pool

    def _goes_inline(self, n: int) -> bool:
        return self.workers == 1 or n <= self.config.par_threshold or n < 2

    def map_blocks(self, fn: Callable[[int, int], object], n: int) -> list:
        """Run ``fn(start, stop)`` over a block partition of ``range(n)``.

        Returns the per-block results in block order.
        """
        if self._goes_inline(n):
            self.inline += 1
            self.last_blocks = [n]
            return [fn(0, n)]
        bounds = block_bounds(n, self.workers)
        self.forks += 1
        self.last_blocks = [stop - start for start, stop in bounds]
        pool = self._executor()
        futures = [pool.submit(fn, start, stop) for start, stop in bounds]
        return [f.result() for f in futures]

    def map(self, fn: Callable, items: Sequence) -> list:
        """Apply a pure ``fn`` to every item; output order follows ``items``."""
        items = list(items)

        def run(start, stop):
            return [fn(item) for item in items[start:stop]]

        out = []
        for chunk in self.map_blocks(run, len(items)):
            out.extend(chunk)
        return out

    def association_arrays(self, batch: TaskBatch, data: DiscreteDataset):
        """Score a batch; returns ``(v, chi2, eff_rows, eff_cols)`` arrays."""
        cand = batch.candidate_indices
        if batch.partner == LABELS:
            partner, partner_card = data.label_codes, data.C
        else:
            partner, partner_card = data.column(batch.partner), int(data.cards[batch.partner])
        columns, cards = data.columns, data.cards

        def run(start, stop):
            return cvtest_block(columns, cards, cand[start:stop], partner, partner_card)

        parts = self.map_blocks(run, cand.size)
        with self._lock:
            self.calls += int(cand.size)
        if len(parts) == 1:
            return parts[0]
        return tuple(np.concatenate([p[i] for p in parts]) for i in range(4))

    def par_fold(self, batch: TaskBatch, data: DiscreteDataset) -> list[AssociationValue]:
        v, stat, er, ec = self.association_arrays(batch, data)
        return [
            AssociationValue(float(v[i]), float(stat[i]), int(er[i]), int(ec[i]))
            for i in range(v.size)
        ]


def par_fold(batch: TaskBatch, data: DiscreteDataset, config: EngineConfig) -> list[AssociationValue]:
    """One-shot fold with a throwaway engine."""
    with ParallelEngine(config) as engine:
        return engine.par_fold(batch, data)
