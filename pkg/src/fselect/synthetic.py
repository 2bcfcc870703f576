"""Seeded synthetic datasets used by the benchmark, tests and demos."""

from __future__ import annotations

import numpy as np

from .dataset import DiscreteDataset, DiscretizerSpec, RawDataset, discretize, from_codes

__all__ = [
    "benchmark_raw",
    "benchmark_dataset",
    "duplicate_feature_dataset",
    "planted_informative_dataset",
    "random_discrete",
]


def benchmark_raw(m=200, r=20_000, C=8, informative=20, seed=0) -> RawDataset:
    """Gaussian class-mean features plus pure-noise features.

    The first ``informative`` columns carry a per-class mean offset with
    unit noise; the rest are standard normal noise.
    """
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, C, size=r)
    values = rng.standard_normal((r, m))
    n_inf = min(informative, m)
    if n_inf:
        means = rng.normal(0.0, 1.5, size=(C, n_inf))
        values[:, :n_inf] += means[labels]
    names = [f"f{j:03d}" for j in range(m)]
    return RawDataset(values, labels, names)


def benchmark_dataset(m=200, r=20_000, C=8, informative=20, seed=0, bins=16) -> DiscreteDataset:
    return discretize(benchmark_raw(m, r, C, informative, seed), DiscretizerSpec("equal_frequency", bins))


def duplicate_feature_dataset(r=60, noise_features=1, seed=0) -> DiscreteDataset:
    """x1 is an exact copy of x0; x2 is independent of x0; x3.. are noise.

    The six labels combine x0 (three levels) with an independent bit; 10%
    of labels are redrawn at random.  x2 observes that bit with 20% of
    rows flipped, so it is relevant but weaker than x0, and shares no
    structure with x0.  Only x1 is redundant with x0.
    """
    rng = np.random.default_rng(seed)
    x0 = rng.integers(0, 3, size=r)
    bit = rng.integers(0, 2, size=r)
    labels = np.where(rng.random(r) < 0.10, rng.integers(0, 6, size=r), 2 * x0 + bit)
    x2 = np.where(rng.random(r) < 0.20, 1 - bit, bit)
    others = rng.integers(0, 3, size=(r, noise_features))
    codes = np.column_stack([x0, x0, x2, others])
    return from_codes(codes, labels)


def planted_informative_dataset(r=200, noise_features=9, seed=0, flip=0.1) -> DiscreteDataset:
    """Binary labels; feature 0 equals the label except for ``flip`` of rows.

    All other features are uniform noise over four categories.
    """
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, size=r)
    x0 = np.where(rng.random(r) < flip, 1 - labels, labels)
    noise = rng.integers(0, 4, size=(r, noise_features))
    return from_codes(np.column_stack([x0, noise]), labels)


def random_discrete(rng: np.random.Generator, m: int, r: int, max_card: int = 4, C: int | None = None):
    """Random codes with guaranteed two label classes (feature columns may be constant)."""
    C = C or int(rng.integers(2, 4))
    labels = rng.integers(0, C, size=r)
    labels[:2] = [0, 1]
    cards = rng.integers(1, max_card + 1, size=m)
    codes = np.column_stack([rng.integers(0, c, size=r) for c in cards])
    return from_codes(codes, labels)
