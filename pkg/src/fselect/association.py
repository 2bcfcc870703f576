"""Cross-tabulation, Pearson chi-square and Cramer's V.

All arithmetic lives in a few ``nogil`` numba kernels so that the
parallel engine's worker threads run truly concurrently.  Every public
entry point funnels through the same kernels, which keeps results
bit-identical whether a value is computed one at a time or in a block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "ContingencyTable",
    "AssociationValue",
    "gen_ct",
    "chi2",
    "cramers_v",
    "cvtest",
]


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray
    row_marginals: np.ndarray
    col_marginals: np.ndarray
    n: int

    @classmethod
    def from_counts(cls, counts) -> "ContingencyTable":
        counts = np.array(counts, dtype=np.int64, ndmin=2)
        if counts.ndim != 2 or counts.shape[0] < 1 or counts.shape[1] < 1:
            raise ValueError("counts must be a non-empty 2-D matrix")
        if (counts < 0).any():
            raise ValueError("counts must be nonnegative")
        return cls(counts, counts.sum(axis=1), counts.sum(axis=0), int(counts.sum()))

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(
            np.ascontiguousarray(self.counts.T), self.col_marginals, self.row_marginals, self.n
        )


@dataclass(frozen=True)
class AssociationValue:
    v: float
    chi2: float
    effective_rows: int
    effective_cols: int


@njit(nogil=True, cache=True)
def _count(x, y, card_x, card_y):
    counts = np.zeros((card_x, card_y), dtype=np.int64)
    for i in range(x.shape[0]):
        counts[x[i], y[i]] += 1
    return counts


@njit(nogil=True, cache=True)
def _stats(counts):
    """Return (chi2, v, effective_rows, effective_cols) for a count matrix."""
    rows, cols = counts.shape
    rm = np.zeros(rows, dtype=np.int64)
    cm = np.zeros(cols, dtype=np.int64)
    n = 0
    for a in range(rows):
        for b in range(cols):
            c = counts[a, b]
            rm[a] += c
            cm[b] += c
            n += c
    eff_r = 0
    for a in range(rows):
        if rm[a] > 0:
            eff_r += 1
    eff_c = 0
    for b in range(cols):
        if cm[b] > 0:
            eff_c += 1
    dof = min(eff_r - 1, eff_c - 1)
    if n == 0 or dof <= 0:
        return 0.0, 0.0, eff_r, eff_c
    nf = float(n)
    terms = np.empty(eff_r * eff_c)
    t = 0
    for a in range(rows):
        if rm[a] == 0:
            continue
        for b in range(cols):
            if cm[b] == 0:
                continue
            e = float(rm[a]) * float(cm[b]) / nf
            d = float(counts[a, b]) - e
            terms[t] = d * d / e
            t += 1
    # summing in sorted order makes the result independent of row/column
    # order, so V is exactly symmetric and relabeling-invariant
    terms.sort()
    stat = 0.0
    for t in range(terms.shape[0]):
        stat += terms[t]
    v = np.sqrt(stat / (nf * dof))
    if v > 1.0:
        v = 1.0
    return stat, v, eff_r, eff_c


@njit(nogil=True, cache=True)
def _cvtest(x, y, card_x, card_y):
    return _stats(_count(x, y, card_x, card_y))


@njit(nogil=True, cache=True)
def _cvtest_block(columns, cards, candidates, partner, partner_card, out_v, out_chi2, out_er, out_ec):
    for i in range(candidates.shape[0]):
        j = candidates[i]
        stat, v, er, ec = _stats(_count(columns[j], partner, cards[j], partner_card))
        out_v[i] = v
        out_chi2[i] = stat
        out_er[i] = er
        out_ec[i] = ec


def _check_column(x, card, name) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.int64)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if x.size and (x.min() < 0 or x.max() >= card):
        raise ValueError(f"{name} has codes outside [0, {card})")
    return x


def _prepare(x, y, card_x, card_y):
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 1:
        raise ValueError("columns must be non-empty")
    if card_x is None:
        card_x = int(x.max()) + 1
    if card_y is None:
        card_y = int(y.max()) + 1
    return _check_column(x, card_x, "x"), _check_column(y, card_y, "y"), int(card_x), int(card_y)


def gen_ct(x, y, card_x=None, card_y=None) -> ContingencyTable:
    """Cross-tabulate two code columns in one counting pass."""
    x, y, card_x, card_y = _prepare(x, y, card_x, card_y)
    counts = _count(x, y, card_x, card_y)
    return ContingencyTable(counts, counts.sum(axis=1), counts.sum(axis=0), x.shape[0])


def chi2(table: ContingencyTable) -> float:
    """Pearson chi-square without continuity correction.

    Rows and columns with a zero marginal are skipped; a table with a
    single effective row or column yields 0.
    """
    return float(_stats(np.ascontiguousarray(table.counts, dtype=np.int64))[0])


def cramers_v(table: ContingencyTable) -> AssociationValue:
    """Cramer's V using effective (nonzero-marginal) category counts."""
    stat, v, er, ec = _stats(np.ascontiguousarray(table.counts, dtype=np.int64))
    return AssociationValue(float(v), float(stat), int(er), int(ec))


def cvtest(x, y, card_x=None, card_y=None) -> AssociationValue:
    """``cramers_v(gen_ct(x, y))`` as one atomic call."""
    x, y, card_x, card_y = _prepare(x, y, card_x, card_y)
    stat, v, er, ec = _cvtest(x, y, card_x, card_y)
    return AssociationValue(float(v), float(stat), int(er), int(ec))


def cvtest_block(columns, cards, candidates, partner, partner_card):
    """V, chi2 and effective sizes for each ``columns[c]`` against ``partner``.

    Inputs are trusted (already validated dataset arrays); used by the
    parallel engine as the unit of work for one worker.
    """
    k = len(candidates)
    out_v = np.empty(k)
    out_chi2 = np.empty(k)
    out_er = np.empty(k, dtype=np.int64)
    out_ec = np.empty(k, dtype=np.int64)
    _cvtest_block(
        columns, cards, np.asarray(candidates, dtype=np.int64), partner, int(partner_card),
        out_v, out_chi2, out_er, out_ec,
    )
    return out_v, out_chi2, out_er, out_ec
