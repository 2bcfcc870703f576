"""Greedy max-association / min-redundancy feature ranking.

Two objectives are supported:

``mmais``  relevance - lambda * mean_redundancy
``mmaiq``  relevance / mean_redundancy

where relevance is Cramer's V against the class labels and the mean
redundancy of a candidate is its average V against the features already
selected.  Each step only scores the unselected candidates against the
feature picked last and adds the result to a running sum, so step ``p``
costs ``m - p + 1`` association tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import DiscreteDataset
from .engine import LABELS, EngineConfig, ParallelEngine, TaskBatch

__all__ = [
    "Objective",
    "SelectionState",
    "RankedFeature",
    "SelectionReport",
    "relevance_vector",
    "step_score",
    "select",
    "score_curve",
    "expected_calls",
    "MMAIQ_EPS",
]

MMAIQ_EPS = 1e-12
KINDS = ("mmaiq", "mmais")
# advisory only: V below this is commonly read as "no substantive association"
WEAK_ASSOCIATION = 0.1


@dataclass(frozen=True)
class Objective:
    kind: str = "mmaiq"
    lam: float = 1.0

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in KINDS:
            raise ValueError(f"unknown objective {self.kind!r}; expected one of {KINDS}")
        if not self.lam > 0:
            raise ValueError("lambda must be > 0")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "lam", float(self.lam))


@dataclass
class SelectionState:
    relevance: np.ndarray
    red_sum: np.ndarray
    selected: list[int] = field(default_factory=list)

    @property
    def p(self) -> int:
        return len(self.selected) + 1

    def unselected(self) -> np.ndarray:
        mask = np.ones(self.relevance.size, dtype=bool)
        mask[self.selected] = False
        return np.flatnonzero(mask)


@dataclass(frozen=True)
class RankedFeature:
    index: int
    name: str
    score: float
    relevance: float
    mean_redundancy: float


@dataclass
class SelectionReport:
    ranking: list[RankedFeature]
    objective: Objective
    k_requested: int
    warnings: list[str] = field(default_factory=list)
    # V between ranked features, in ranking order; diagonal is 1
    pair_v: np.ndarray = None

    @property
    def indices(self) -> list[int]:
        return [f.index for f in self.ranking]

    def truncated(self, k: int) -> "SelectionReport":
        return SelectionReport(
            self.ranking[:k], self.objective, self.k_requested, list(self.warnings),
            None if self.pair_v is None else self.pair_v[:k, :k].copy(),
        )


def expected_calls(m: int, k: int) -> int:
    """Association tests made by :func:`select` for ``m`` features and ``k`` steps."""
    return m + sum(m - p + 1 for p in range(2, k + 1))


def step_score(objective: Objective, relevance_j, red_sum_j, p: int):
    """Greedy objective for a candidate at step ``p >= 2``.

    Works elementwise on arrays.  The quotient form ignores lambda: a
    common positive factor in every denominator cannot move the argmax.
    """
    mean_red = np.asarray(red_sum_j, dtype=np.float64) / (p - 1)
    rel = np.asarray(relevance_j, dtype=np.float64)
    if objective.kind == "mmais":
        out = rel - objective.lam * mean_red
    else:
        out = rel / np.maximum(mean_red, MMAIQ_EPS)
    return out if out.ndim else float(out)


def relevance_vector(data: DiscreteDataset, engine: ParallelEngine) -> np.ndarray:
    """Cramer's V of every feature against the class labels."""
    batch = TaskBatch(np.arange(data.m), LABELS)
    return engine.association_arrays(batch, data)[0]


def _run(data, objective, k, engine, trace):
    warnings = [w for w in data.warnings]
    eligible = data.nonconstant()
    n_eligible = int(eligible.sum())
    if n_eligible < k:
        warnings.append(
            f"only {n_eligible} non-constant features; ranking truncated from k={k}"
        )
    k_eff = min(k, n_eligible)

    relevance = relevance_vector(data, engine)
    weak = [data.feature_names[j] for j in range(data.m) if eligible[j] and relevance[j] < WEAK_ASSOCIATION]
    if weak:
        warnings.append(
            f"{len(weak)} feature(s) have relevance below {WEAK_ASSOCIATION}: " + ", ".join(weak[:10])
            + (" ..." if len(weak) > 10 else "")
        )
    state = SelectionState(relevance, np.zeros(data.m))
    # V(candidate, selected[s]) for every still-unselected candidate at step s
    against = np.full((data.m, max(k_eff, 1)), np.nan)
    ranking: list[RankedFeature] = []
    if k_eff == 0:
        return SelectionReport(ranking, objective, k, warnings, np.zeros((0, 0)))

    scores = np.where(eligible, relevance, -np.inf)
    first = int(np.argmax(scores))
    state.selected.append(first)
    ranking.append(RankedFeature(first, data.feature_names[first], float(relevance[first]),
                                 float(relevance[first]), 0.0))
    if trace is not None:
        trace.append((state.unselected(), scores.copy(), first))

    for p in range(2, k_eff + 1):
        last = state.selected[-1]
        cand = state.unselected()
        v = engine.association_arrays(TaskBatch(cand, last), data)[0]
        state.red_sum[cand] += v
        against[cand, p - 2] = v

        step = np.full(data.m, -np.inf)
        ok = cand[eligible[cand]]
        step[ok] = step_score(objective, relevance[ok], state.red_sum[ok], p)
        best = int(np.argmax(step))
        state.selected.append(best)
        ranking.append(RankedFeature(
            best, data.feature_names[best], float(step[best]), float(relevance[best]),
            float(state.red_sum[best] / (p - 1)),
        ))
        if trace is not None:
            trace.append((cand, step.copy(), best))

    if trace is not None:
        trace.state = state
    pair_v = np.eye(k_eff)
    for a in range(k_eff):
        for b in range(a):
            pair_v[a, b] = pair_v[b, a] = against[state.selected[a], b]
    return SelectionReport(ranking, objective, k, warnings, pair_v)


class _Trace(list):
    state = None


def select(
    data: DiscreteDataset,
    objective: Objective = Objective(),
    k: int | None = None,
    engine: ParallelEngine | None = None,
) -> SelectionReport:
    """Rank up to ``k`` features greedily under ``objective``.

    Step one takes the most relevant feature; each later step takes the
    unselected candidate with the best :func:`step_score`.  Ties go to
    the lowest feature index.  Constant features are scored (so the
    number of association tests depends only on ``m`` and ``k``) but are
    never selected.  If fewer than ``k`` features are selectable the
    ranking is truncated and a warning recorded.
    """
    if k is None:
        k = data.m
    if not 1 <= k <= data.m:
        raise ValueError(f"k must be in [1, {data.m}], got {k}")
    if engine is None:
        with ParallelEngine(EngineConfig.from_env()) as eng:
            return _run(data, objective, k, eng, None)
    return _run(data, objective, k, engine, None)


def select_traced(data, objective, k, engine):
    """Like :func:`select` but also returns per-step (candidates, scores, pick).

    The trace's ``state`` attribute holds the final :class:`SelectionState`.
    """
    trace = _Trace()
    report = _run(data, objective, k, engine, trace)
    return report, trace


def score_curve(report: SelectionReport) -> list[tuple[int, float, float]]:
    """Mean relevance and mean pairwise redundancy for every ranking prefix.

    Redundancy averages over all ordered pairs in the prefix including the
    diagonal, i.e. ``sum(V) / k**2``.
    """
    if not report.ranking:
        raise ValueError("empty ranking")
    rel = np.array([f.relevance for f in report.ranking])
    out = []
    for k in range(1, len(report.ranking) + 1):
        a = float(rel[:k].sum() / k)
        r = float(report.pair_v[:k, :k].sum() / (k * k))
        out.append((k, a, r))
    return out
