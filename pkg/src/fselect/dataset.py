"""Tabular ingestion and discretization.

Raw values are real-valued (or categorical strings coded at load time);
every downstream statistic works on the dense integer codes of a
:class:`DiscreteDataset`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "DatasetError",
    "RawDataset",
    "DiscreteDataset",
    "DiscretizerSpec",
    "load_csv",
    "discretize",
    "densify",
    "from_codes",
]

METHODS = ("equal_frequency", "equal_width", "passthrough")


class DatasetError(ValueError):
    """Malformed or degenerate input data."""


def _first_appearance_codes(items: Sequence) -> tuple[np.ndarray, list]:
    lookup: dict = {}
    codes = np.empty(len(items), dtype=np.int64)
    for i, item in enumerate(items):
        codes[i] = lookup.setdefault(item, len(lookup))
    return codes, list(lookup)


def densify(codes: np.ndarray) -> tuple[np.ndarray, int]:
    """Relabel integer codes to ``0..k-1`` preserving their order."""
    uniq, inverse = np.unique(codes, return_inverse=True)
    return inverse.astype(np.int64).reshape(codes.shape), len(uniq)


@dataclass(frozen=True)
class RawDataset:
    values: np.ndarray
    labels: np.ndarray
    feature_names: list[str]
    categorical: np.ndarray = None  # bool per column; True columns bypass binning

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise DatasetError("values must be a 2-D matrix")
        r, m = values.shape
        labels = np.asarray(self.labels)
        if r < 2:
            raise DatasetError(f"empty dataset: need at least 2 rows, got {r}")
        if m < 1:
            raise DatasetError("dataset has no feature columns")
        if labels.shape != (r,):
            raise DatasetError(f"labels length {labels.shape} does not match {r} rows")
        if len(self.feature_names) != m:
            raise DatasetError("feature_names length does not match column count")
        if len(set(self.feature_names)) != m:
            raise DatasetError("feature names must be unique")
        if not np.all(np.isfinite(values)):
            raise DatasetError("values contain NaN or infinity")
        categorical = (
            np.zeros(m, dtype=bool)
            if self.categorical is None
            else np.asarray(self.categorical, dtype=bool)
        )
        if categorical.shape != (m,):
            raise DatasetError("categorical flags length does not match column count")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", list(self.feature_names))
        object.__setattr__(self, "categorical", categorical)

    @property
    def r(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class DiscreteDataset:
    """Dense categorical codes plus class labels.

    ``codes`` is ``(r, m)``; column ``j`` takes values in ``[0, cards[j])``
    and every value occurs.  Arrays are made read-only on construction so
    instances can be shared freely between worker threads.
    """

    codes: np.ndarray
    cards: np.ndarray
    label_codes: np.ndarray
    C: int
    feature_names: list[str]
    class_names: list = None
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.int64, order="C")
        cards = np.array(self.cards, dtype=np.int64)
        labels = np.array(self.label_codes, dtype=np.int64)
        columns = np.ascontiguousarray(codes.T)
        for arr in (codes, cards, labels, columns):
            arr.flags.writeable = False
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "cards", cards)
        object.__setattr__(self, "label_codes", labels)
        object.__setattr__(self, "C", int(self.C))
        object.__setattr__(self, "feature_names", list(self.feature_names))
        if self.class_names is None:
            object.__setattr__(self, "class_names", list(range(self.C)))
        object.__setattr__(self, "_columns", columns)

    @property
    def r(self) -> int:
        return self.codes.shape[0]

    @property
    def m(self) -> int:
        return self.codes.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Contiguous read-only view of feature column ``j``."""
        return self._columns[j]

    @property
    def columns(self) -> np.ndarray:
        """``(m, r)`` contiguous transpose of ``codes``."""
        return self._columns

    def nonconstant(self) -> np.ndarray:
        return self.cards > 1

    def validate(self) -> None:
        r, m = self.codes.shape
        if self.cards.shape != (m,) or len(self.feature_names) != m:
            raise DatasetError("cards / feature_names do not match column count")
        if self.label_codes.shape != (r,):
            raise DatasetError("label vector does not match row count")
        for j in range(m):
            col = self.codes[:, j]
            if col.min() < 0 or col.max() >= self.cards[j]:
                raise DatasetError(f"column {j} has codes outside [0, {self.cards[j]})")
            if np.unique(col).size != self.cards[j]:
                raise DatasetError(f"column {j} codes are not dense")
        if self.C < 2:
            raise DatasetError("fewer than 2 classes")
        if np.unique(self.label_codes).size != self.C or self.label_codes.max() >= self.C:
            raise DatasetError("label codes are not dense in [0, C)")

    def take_rows(self, rows: np.ndarray) -> "DiscreteDataset":
        """Row subset with columns and labels re-densified.

        Column indices are preserved, so a ranking computed on the subset
        refers to the same features as on the parent.
        """
        rows = np.asarray(rows, dtype=np.int64)
        codes = np.empty((rows.size, self.m), dtype=np.int64)
        cards = np.empty(self.m, dtype=np.int64)
        for j in range(self.m):
            codes[:, j], cards[j] = densify(self.codes[rows, j])
        labels, C = densify(self.label_codes[rows])
        return DiscreteDataset(codes, cards, labels, C, self.feature_names)


@dataclass(frozen=True)
class DiscretizerSpec:
    method: str = "equal_frequency"
    bins: int = 16

    def __post_init__(self):
        method = self.method.replace("-", "_")
        if method not in METHODS:
            raise ValueError(f"unknown discretizer {self.method!r}; expected one of {METHODS}")
        if method != "passthrough" and self.bins < 2:
            raise ValueError("bins must be >= 2")
        object.__setattr__(self, "method", method)


def _parse_float(cell: str):
    try:
        return float(cell)
    except ValueError:
        return None


def load_csv(path, label_col=-1, delimiter: str = ",") -> RawDataset:
    """Read a headed CSV file into a :class:`RawDataset`.

    ``label_col`` is a column name or integer position (negative allowed).
    A feature column is categorical iff any of its cells fails to parse
    as a float; such columns are coded by first appearance.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    rows = [row for row in rows if row]
    if not rows:
        raise DatasetError(f"{path}: file is empty")
    header, body = rows[0], rows[1:]
    width = len(header)
    for lineno, row in enumerate(body, start=2):
        if len(row) != width:
            raise DatasetError(f"{path}:{lineno}: ragged row ({len(row)} cells, expected {width})")
    if isinstance(label_col, str) and not label_col.lstrip("-").isdigit():
        matches = [i for i, name in enumerate(header) if name == label_col]
        if len(matches) != 1:
            raise DatasetError(f"label column {label_col!r} not found exactly once in header")
        label_idx = matches[0]
    else:
        label_idx = int(label_col)
        if not -width <= label_idx < width:
            raise DatasetError(f"label column index {label_idx} out of range")
        label_idx %= width
    if len(body) < 2:
        raise DatasetError(f"empty dataset: need at least 2 rows, got {len(body)}")

    labels = [row[label_idx].strip() for row in body]
    if any(lab == "" for lab in labels):
        raise DatasetError("missing label value")
    if len(set(labels)) < 2:
        raise DatasetError("fewer than 2 classes in label column")

    feature_idx = [i for i in range(width) if i != label_idx]
    if not feature_idx:
        raise DatasetError("no feature columns besides the label")
    values = np.empty((len(body), len(feature_idx)))
    categorical = np.zeros(len(feature_idx), dtype=bool)
    for out_j, j in enumerate(feature_idx):
        cells = [row[j].strip() for row in body]
        if any(cell == "" for cell in cells):
            raise DatasetError(f"missing value in column {header[j]!r}")
        parsed = [_parse_float(cell) for cell in cells]
        if any(v is None for v in parsed):
            codes, _ = _first_appearance_codes(cells)
            values[:, out_j] = codes
            categorical[out_j] = True
        else:
            values[:, out_j] = parsed
    return RawDataset(
        values=values,
        labels=np.array(labels, dtype=object),
        feature_names=[header[j] for j in feature_idx],
        categorical=categorical,
    )


def _bin_equal_frequency(col: np.ndarray, bins: int) -> np.ndarray:
    srt = np.sort(col)
    r = col.size
    cut_pos = (np.arange(1, bins) * r) // bins
    cuts = np.unique(srt[cut_pos])
    # left-closed: a value equal to a cut goes to the upper bin
    return np.searchsorted(cuts, col, side="right")


def _bin_equal_width(col: np.ndarray, bins: int) -> np.ndarray:
    lo, hi = col.min(), col.max()
    width = (hi - lo) / bins
    idx = np.floor((col - lo) / width).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def discretize_column(col: np.ndarray, spec: DiscretizerSpec) -> tuple[np.ndarray, int]:
    col = np.asarray(col, dtype=np.float64)
    distinct = np.unique(col)
    if spec.method == "passthrough" or distinct.size <= spec.bins:
        return densify(col)
    if spec.method == "equal_frequency":
        raw = _bin_equal_frequency(col, spec.bins)
    else:
        raw = _bin_equal_width(col, spec.bins)
    return densify(raw)


def discretize(raw: RawDataset, spec: DiscretizerSpec = DiscretizerSpec()) -> DiscreteDataset:
    """Map every column of ``raw`` to dense categorical codes."""
    codes = np.empty((raw.r, raw.m), dtype=np.int64)
    cards = np.empty(raw.m, dtype=np.int64)
    warnings = []
    passthrough = DiscretizerSpec("passthrough", spec.bins)
    for j in range(raw.m):
        col_spec = passthrough if raw.categorical[j] else spec
        codes[:, j], cards[j] = discretize_column(raw.values[:, j], col_spec)
        if cards[j] == 1:
            warnings.append(
                f"feature {raw.feature_names[j]!r} is constant and can never be selected"
            )
    label_codes, class_names = _first_appearance_codes(raw.labels.tolist())
    if len(class_names) < 2:
        raise DatasetError("fewer than 2 classes")
    data = DiscreteDataset(
        codes=codes,
        cards=cards,
        label_codes=label_codes,
        C=len(class_names),
        feature_names=raw.feature_names,
        class_names=class_names,
        warnings=warnings,
    )
    data.validate()
    return data


def from_codes(codes, labels, feature_names=None) -> DiscreteDataset:
    """Build a :class:`DiscreteDataset` from already-categorical arrays."""
    codes = np.asarray(codes)
    if codes.ndim != 2:
        raise DatasetError("codes must be a 2-D matrix")
    m = codes.shape[1]
    names = [f"x{j}" for j in range(m)] if feature_names is None else feature_names
    raw = RawDataset(codes.astype(np.float64), np.asarray(labels), names, np.ones(m, dtype=bool))
    return discretize(raw, DiscretizerSpec("passthrough"))
