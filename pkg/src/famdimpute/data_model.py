"""Mixed datasets, the indicator (dummy) expansion and preprocessing remedies.

A :class:`MixedDataset` is an ordered collection of typed columns. Missing
cells are tracked by an explicit boolean mask on each column, never by a
sentinel inside the value domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np


class DataError(ValueError):
    """Raised when a dataset violates the invariants an operation needs."""


class Kind(str, Enum):
    CONTINUOUS = "cont"
    CATEGORICAL = "cat"


def _is_missing(v) -> bool:
    if v is None:
        return True
    return isinstance(v, float) and math.isnan(v)


@dataclass(frozen=True, eq=False)
class Column:
    """One typed column. ``values`` holds placeholders where ``missing`` is set
    (0.0 for continuous, ``""`` for categorical)."""

    name: str
    kind: Kind
    values: np.ndarray
    missing: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        missing = np.asarray(self.missing, dtype=bool)
        if values.ndim != 1 or values.shape != missing.shape:
            raise DataError(f"column {self.name!r}: values and mask must be 1-d of equal length")
        if self.kind is Kind.CONTINUOUS:
            values = values.astype(float)
            values = np.where(missing, 0.0, values)
            if not np.all(np.isfinite(values)):
                raise DataError(f"column {self.name!r}: non-finite continuous value")
        else:
            values = np.where(missing, "", values.astype(str)).astype(object)
        values.setflags(write=False)
        missing.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "missing", missing)

    @classmethod
    def continuous(cls, name: str, values: Iterable) -> "Column":
        vals = list(values)
        missing = np.array([_is_missing(v) for v in vals], dtype=bool)
        data = np.array([0.0 if m else float(v) for v, m in zip(vals, missing)])
        return cls(name, Kind.CONTINUOUS, data, missing)

    @classmethod
    def categorical(cls, name: str, values: Iterable) -> "Column":
        vals = list(values)
        missing = np.array([_is_missing(v) for v in vals], dtype=bool)
        data = np.array(["" if m else str(v) for v, m in zip(vals, missing)], dtype=object)
        return cls(name, Kind.CATEGORICAL, data, missing)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_continuous(self) -> bool:
        return self.kind is Kind.CONTINUOUS

    @property
    def observed(self) -> np.ndarray:
        return self.values[~self.missing]

    def categories(self) -> list[str]:
        """Sorted set of observed labels."""
        return sorted(set(self.observed.tolist()))

    def cells(self) -> list:
        """Values as plain Python objects, ``None`` for missing."""
        return [None if m else (float(v) if self.is_continuous else v)
                for v, m in zip(self.values.tolist(), self.missing.tolist())]

    def with_missing(self, missing: np.ndarray) -> "Column":
        return Column(self.name, self.kind, self.values, np.asarray(missing, dtype=bool))

    def equals(self, other: "Column") -> bool:
        if (self.name, self.kind) != (other.name, other.kind):
            return False
        if not np.array_equal(self.missing, other.missing):
            return False
        keep = ~self.missing
        if self.is_continuous:
            return bool(np.array_equal(self.values[keep], other.values[keep]))
        return self.values[keep].tolist() == other.values[keep].tolist()


@dataclass(frozen=True, eq=False)
class MixedDataset:
    columns: tuple[Column, ...]

    def __post_init__(self):
        cols = tuple(self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols:
            raise DataError("dataset has no columns")
        n = len(cols[0])
        for c in cols:
            if len(c) != n:
                raise DataError(f"column {c.name!r} has {len(c)} cells, expected {n}")
        names = [c.name for c in cols]
        if len(set(names)) != len(names):
            raise DataError("duplicate column names")

    @property
    def n_rows(self) -> int:
        return len(self.columns[0])

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    @property
    def continuous(self) -> list[Column]:
        return [c for c in self.columns if c.is_continuous]

    @property
    def categorical(self) -> list[Column]:
        return [c for c in self.columns if not c.is_continuous]

    def __getitem__(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def missing_mask(self) -> np.ndarray:
        """Boolean I x K array, True where a cell is missing."""
        return np.column_stack([c.missing for c in self.columns])

    def n_missing(self) -> int:
        return int(self.missing_mask().sum())

    def is_complete(self) -> bool:
        return not self.missing_mask().any()

    def select(self, names: Sequence[str]) -> "MixedDataset":
        return MixedDataset(tuple(self[n] for n in names))

    def append(self, column: Column) -> "MixedDataset":
        return MixedDataset(self.columns + (column,))

    def with_mask(self, missing: np.ndarray) -> "MixedDataset":
        """Same values with a new I x K missingness mask."""
        missing = np.asarray(missing, dtype=bool)
        return MixedDataset(tuple(c.with_missing(missing[:, k]) for k, c in enumerate(self.columns)))

    def equals(self, other: "MixedDataset") -> bool:
        return (len(self.columns) == len(other.columns)
                and all(a.equals(b) for a, b in zip(self.columns, other.columns)))


def check_invariants(ds: MixedDataset) -> None:
    """Raise :class:`DataError` if a column cannot be weighted by FAMD."""
    for c in ds.columns:
        obs = c.observed
        if c.is_continuous:
            if len(np.unique(obs)) < 2:
                raise DataError(f"constant column: {c.name!r} has fewer than 2 distinct observed values")
        elif len(set(obs.tolist())) < 2:
            raise DataError(f"degenerate categorical: {c.name!r} has fewer than 2 observed categories")


@dataclass(frozen=True, eq=False)
class IndicatorExpansion:
    """Continuous columns followed by one dummy block per categorical variable.

    ``layout[j]`` is ``(name, None)`` for a continuous column and
    ``(name, label)`` for a dummy column.
    """

    x: np.ndarray
    w: np.ndarray
    layout: tuple[tuple[str, str | None], ...]
    blocks: tuple[tuple[int, int], ...] = field(default=())

    @property
    def J(self) -> int:
        return self.x.shape[1]

    @property
    def n_continuous(self) -> int:
        return sum(1 for _, lab in self.layout if lab is None)

    @property
    def n_categorical(self) -> int:
        return len(self.blocks)

    @property
    def is_continuous(self) -> np.ndarray:
        return np.array([lab is None for _, lab in self.layout], dtype=bool)


@dataclass(frozen=True, eq=False)
class FuzzyIndicator:
    """Completed indicator matrix; ``imputed`` flags cells that were missing."""

    values: np.ndarray
    imputed: np.ndarray
    layout: tuple[tuple[str, str | None], ...]
    blocks: tuple[tuple[int, int], ...]

    def block_sums(self) -> np.ndarray:
        """I x K2 row sums of each dummy block."""
        if not self.blocks:
            return np.zeros((self.values.shape[0], 0))
        return np.column_stack([self.values[:, a:b].sum(axis=1) for a, b in self.blocks])


def _layout_of(ds: MixedDataset):
    layout: list[tuple[str, str | None]] = [(c.name, None) for c in ds.continuous]
    blocks = []
    for c in ds.categorical:
        start = len(layout)
        layout.extend((c.name, lab) for lab in c.categories())
        blocks.append((start, len(layout)))
    return tuple(layout), tuple(blocks)


def encode(ds: MixedDataset) -> IndicatorExpansion:
    check_invariants(ds)
    layout, blocks = _layout_of(ds)
    n = ds.n_rows
    x = np.zeros((n, len(layout)))
    w = np.ones((n, len(layout)))
    for j, c in enumerate(ds.continuous):
        x[:, j] = c.values
        w[c.missing, j] = 0.0
    for c, (a, b) in zip(ds.categorical, blocks):
        labels = [lab for _, lab in layout[a:b]]
        index = {lab: a + k for k, lab in enumerate(labels)}
        rows = np.flatnonzero(~c.missing)
        x[rows, [index[v] for v in c.values[rows]]] = 1.0
        w[c.missing, a:b] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return IndicatorExpansion(x, w, layout, blocks)


def decode(fz: FuzzyIndicator, ds: MixedDataset) -> MixedDataset:
    """Map a fuzzy indicator back to labels; ties go to the first category."""
    layout, blocks = _layout_of(ds)
    if layout != tuple(fz.layout) or fz.values.shape != (ds.n_rows, len(layout)):
        raise DataError("fuzzy indicator layout does not match the dataset")
    out = {}
    for j, c in enumerate(ds.continuous):
        vals = np.where(c.missing, fz.values[:, j], c.values)
        out[c.name] = Column(c.name, Kind.CONTINUOUS, vals, np.zeros(ds.n_rows, bool))
    for c, (a, b) in zip(ds.categorical, blocks):
        labels = np.array([lab for _, lab in layout[a:b]], dtype=object)
        best = labels[np.argmax(fz.values[:, a:b], axis=1)]
        vals = np.where(c.missing, best, c.values)
        out[c.name] = Column(c.name, Kind.CATEGORICAL, vals, np.zeros(ds.n_rows, bool))
    return MixedDataset(tuple(out[name] for name in ds.names))


def equal_count_bins(values: np.ndarray, q: int) -> np.ndarray:
    """Bin index in ``0..q-1`` for each value; boundary ties go to the lower bin."""
    values = np.asarray(values, dtype=float)
    m = len(values)
    srt = np.sort(values)
    # last element of bin k in an equal-count split of m sorted values
    ends = [math.ceil(k * m / q) - 1 for k in range(1, q)]
    bounds = srt[ends]
    return np.searchsorted(bounds, values, side="left")


def bin_continuous(ds: MixedDataset, col: str, q: int, name: str | None = None) -> MixedDataset:
    c = ds[col]
    if not c.is_continuous:
        raise DataError(f"{col!r} is not continuous")
    if q < 2:
        raise DataError("q must be at least 2")
    obs = c.values[~c.missing]
    if len(np.unique(obs)) < q:
        raise DataError(f"{col!r} has fewer than {q} distinct observed values")
    idx = np.zeros(ds.n_rows, dtype=int)
    idx[~c.missing] = equal_count_bins(obs, q)
    width = len(str(q))
    labels = np.array([f"b{k + 1:0{width}d}" for k in idx], dtype=object)
    return ds.append(Column(name or f"{col}_bin", Kind.CATEGORICAL, labels, c.missing.copy()))


def add_interaction(ds: MixedDataset, a: str, b: str, name: str | None = None) -> MixedDataset:
    ca, cb = ds[a], ds[b]
    if ca.is_continuous or cb.is_continuous:
        raise DataError("interaction needs two categorical columns")
    missing = ca.missing | cb.missing
    labels = np.array([x + y for x, y in zip(ca.values, cb.values)], dtype=object)
    return ds.append(Column(name or f"{a}{b}", Kind.CATEGORICAL, labels, missing))
