"""K-fold estimate of the best ranking prefix length.

A ranking is cut at every length ``k`` and a categorical naive Bayes
classifier is cross-validated on each prefix; the prefix with the best
mean accuracy wins (smallest ``k`` on ties).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import DiscreteDataset
from .engine import EngineConfig, ParallelEngine
from .selector import SelectionReport, select

__all__ = ["FoldPlan", "CvCurve", "make_folds", "nb_classify", "nb_predict", "cv_curve"]


@dataclass(frozen=True)
class FoldPlan:
    folds: list[np.ndarray]
    seed: int
    stratified: bool
    warnings: list[str] = field(default_factory=list)

    @property
    def K(self) -> int:
        return len(self.folds)

    def train_test(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        test = self.folds[i]
        train = np.sort(np.concatenate([f for j, f in enumerate(self.folds) if j != i]))
        return train, test


@dataclass
class CvCurve:
    accuracy: np.ndarray  # index k-1 holds the mean accuracy of the k-prefix
    best_k: int
    fold_accuracies: np.ndarray  # (K, k_max)
    ranking: list[int]
    K: int
    seed: int
    reselect: bool = False
    warnings: list[str] = field(default_factory=list)


def make_folds(data_or_labels, K: int, seed: int = 42, stratified: bool = True) -> FoldPlan:
    """Shuffle rows with ``seed`` and deal them round-robin into ``K`` folds.

    When stratified, rows are dealt class by class, continuing the deal
    position across classes so that both the per-class and the overall
    fold sizes differ by at most one.  If any class has fewer than ``K``
    rows the plan falls back to an unstratified deal with a warning.
    """
    labels = getattr(data_or_labels, "label_codes", data_or_labels)
    labels = np.asarray(labels)
    r = labels.size
    if not 2 <= K <= r:
        raise ValueError(f"K must be in [2, {r}], got {K}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(r)
    warnings = []
    if stratified:
        classes, counts = np.unique(labels, return_counts=True)
        if counts.min() < K:
            warnings.append(
                f"stratified {K}-fold impossible: smallest class has {counts.min()} rows; "
                "falling back to unstratified folds"
            )
            stratified = False
    assign = np.empty(r, dtype=np.int64)
    if stratified:
        pos = 0
        for c in classes:
            rows = perm[labels[perm] == c]
            assign[rows] = (pos + np.arange(rows.size)) % K
            pos = (pos + rows.size) % K
    else:
        assign[perm] = np.arange(r) % K
    folds = [np.sort(np.flatnonzero(assign == i)) for i in range(K)]
    return FoldPlan(folds, seed, stratified, warnings)


def _fit(data: DiscreteDataset, train: np.ndarray, features):
    C = data.C
    y = data.label_codes[train]
    class_counts = np.bincount(y, minlength=C).astype(np.float64)
    log_prior = np.log((class_counts + 1.0) / (train.size + C))
    tables = []
    for j in features:
        card = int(data.cards[j])
        counts = np.zeros((C, card))
        np.add.at(counts, (y, data.codes[train, j]), 1.0)
        tables.append(np.log((counts + 1.0) / (class_counts[:, None] + card)))
    return log_prior, tables


def nb_predict(data: DiscreteDataset, train, test, features) -> np.ndarray:
    """Add-one smoothed categorical naive Bayes predictions for ``test`` rows."""
    train = np.asarray(train, dtype=np.int64)
    test = np.asarray(test, dtype=np.int64)
    log_prior, tables = _fit(data, train, features)
    scores = np.tile(log_prior, (test.size, 1))
    for j, table in zip(features, tables):
        scores += table[:, data.codes[test, j]].T
    # argmax returns the first maximum: ties go to the lowest class code
    return np.argmax(scores, axis=1)


def nb_classify(train, test, features, data: DiscreteDataset) -> float:
    """Fraction of ``test`` rows that naive Bayes trained on ``train`` gets right."""
    features = list(features)
    if not features:
        raise ValueError("features must be non-empty")
    if len(train) == 0:
        raise ValueError("training set is empty")
    test = np.asarray(test, dtype=np.int64)
    if test.size == 0:
        return 0.0
    pred = nb_predict(data, train, test, features)
    return float(np.mean(pred == data.label_codes[test]))


def cv_curve(
    data: DiscreteDataset,
    ranking: SelectionReport,
    K: int = 5,
    seed: int = 42,
    engine: ParallelEngine | None = None,
    stratified: bool = True,
    reselect: bool = False,
) -> CvCurve:
    """Cross-validated accuracy for every prefix of ``ranking``.

    By default the ranking is fixed (computed once on all rows) and only
    the classifier is cross-validated.  With ``reselect`` the ranking is
    recomputed on each fold's training rows with the same objective and
    length, which avoids selection bias at ``K`` times the cost.
    """
    if not ranking.ranking:
        raise ValueError("ranking is empty")
    own_engine = engine is None
    if own_engine:
        engine = ParallelEngine(EngineConfig.from_env())
    try:
        plan = make_folds(data, K, seed, stratified)
        k_max = len(ranking.ranking)
        order = [ranking.indices] * K
        warnings = list(plan.warnings)
        if reselect:
            order = []
            for i in range(K):
                train, _ = plan.train_test(i)
                sub = data.take_rows(train)
                k_fold = min(k_max, int(sub.nonconstant().sum()))
                rep = select(sub, ranking.objective, max(k_fold, 1), engine)
                idx = rep.indices
                if len(idx) < k_max:
                    warnings.append(f"fold {i}: reselected ranking has only {len(idx)} features")
                    # pad with the full-data ranking so every fold covers k_max
                    idx = idx + [j for j in ranking.indices if j not in idx]
                order.append(idx[:k_max])
        splits = [plan.train_test(i) for i in range(K)]
        tasks = [(i, k) for i in range(K) for k in range(1, k_max + 1)]

        def run(task):
            i, k = task
            train, test = splits[i]
            return nb_classify(train, test, order[i][:k], data)

        results = engine.map(run, tasks)
    finally:
        if own_engine:
            engine.close()
    fold_acc = np.array(results, dtype=np.float64).reshape(K, k_max)
    accuracy = fold_acc.mean(axis=0)
    best_k = int(np.argmax(accuracy)) + 1
    return CvCurve(accuracy, best_k, fold_acc, ranking.indices, K, seed, reselect, warnings)
