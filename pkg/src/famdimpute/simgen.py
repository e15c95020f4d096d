"""Synthetic mixed datasets for benchmarking the imputation.

Every generator takes an explicit seed and is reproducible. Replicate ``r``
of a run seeded with ``seed`` uses ``seed + r``.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .data_model import Column, DataError, Kind, MixedDataset, equal_count_bins


def category_labels(q: int) -> list[str]:
    if q <= 26:
        return list(string.ascii_lowercase[:q])
    width = len(str(q))
    return [f"c{k + 1:0{width}d}" for k in range(q)]


@dataclass(frozen=True)
class Group:
    """Variables replicated from one latent dimension."""

    n_cont: int
    n_cat: int = 0
    q: int = 3


@dataclass(frozen=True)
class ToySpec:
    groups: tuple[Group, ...]
    n: int = 100
    snr: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if not self.groups:
            raise ValueError("need at least one group")
        for g in self.groups:
            if g.n_cont + g.n_cat < 1:
                raise ValueError("empty group")
            if g.n_cat and g.q < 2:
                raise ValueError("categorical members need q >= 2")
        if not self.snr > 0:
            raise ValueError("snr must be > 0")

    @property
    def s_prime(self) -> int:
        return len(self.groups)


@dataclass(frozen=True)
class MaskSpec:
    fraction: float
    seed: int = 0


# Two latent dimensions, each carrying 2 continuous and 2 four-level variables.
def strategy_toy(n: int = 100, snr: float = 3.0, seed: int = 0) -> ToySpec:
    return ToySpec((Group(2, 2, 4), Group(2, 2, 4)), n=n, snr=snr, seed=seed)


# Groups of 8 and 4 variables, half categorical with 3 levels: 4 underlying dimensions.
def dimension_toy(n: int = 100, snr: float = 3.0, seed: int = 0) -> ToySpec:
    return ToySpec((Group(4, 4, 3), Group(2, 2, 3)), n=n, snr=snr, seed=seed)


def gen_toy(spec: ToySpec) -> MixedDataset:
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    for g in spec.groups:
        if g.n_cat and n < g.q:
            raise DataError(f"n={n} is smaller than q={g.q}")
    latent = rng.standard_normal((n, spec.s_prime))
    noise_sd = 1.0 / spec.snr
    cont, cat = [], []
    for gi, g in enumerate(spec.groups):
        for _ in range(g.n_cont):
            vals = latent[:, gi] + noise_sd * rng.standard_normal(n)
            cont.append(vals)
        for _ in range(g.n_cat):
            vals = latent[:, gi] + noise_sd * rng.standard_normal(n)
            labels = np.array(category_labels(g.q), dtype=object)
            cat.append(labels[equal_count_bins(vals, g.q)])
    no_missing = np.zeros(n, dtype=bool)
    cols = [Column(f"x{k + 1}", Kind.CONTINUOUS, v, no_missing) for k, v in enumerate(cont)]
    cols += [Column(f"z{k + 1}", Kind.CATEGORICAL, v, no_missing) for k, v in enumerate(cat)]
    return MixedDataset(tuple(cols))


def _viable(ds: MixedDataset, missing: np.ndarray) -> bool:
    for k, c in enumerate(ds.columns):
        obs = c.values[~missing[:, k]]
        if len(obs) < 2 or len(set(obs.tolist())) < 2:
            return False
    return True


def mcar_mask(ds: MixedDataset, m: MaskSpec, retries: int = 100) -> MixedDataset:
    """Mask ``round(fraction * I * K)`` observed cells uniformly at random.

    The draw is repeated (up to ``retries`` times) while some column would be
    left with fewer than two observed cells or a single observed value.
    """
    if not 0 <= m.fraction < 1:
        raise ValueError("fraction must be in [0, 1)")
    base = ds.missing_mask()
    n_cells = base.size
    count = int(np.floor(m.fraction * n_cells + 0.5))
    if count == 0:
        return ds
    candidates = np.flatnonzero(~base.ravel())
    if count > len(candidates):
        raise DataError("infeasible fraction: not enough observed cells")
    rng = np.random.default_rng(m.seed)
    for _ in range(retries):
        pick = rng.choice(candidates, size=count, replace=False)
        missing = base.ravel().copy()
        missing[pick] = True
        missing = missing.reshape(base.shape)
        if _viable(ds, missing):
            return ds.with_mask(missing)
    raise DataError(f"infeasible fraction {m.fraction}: every draw emptied a column")


@dataclass(frozen=True, eq=False)
class Simulation:
    truth: MixedDataset
    data: MixedDataset
    meta: dict = field(default_factory=dict)

    @property
    def mask(self) -> np.ndarray:
        return self.data.missing_mask() & ~self.truth.missing_mask()


RARE = "a"


def gen_rare(n: int, f: float, seed: int = 0, snr: float = 1.0) -> Simulation:
    """Two continuous and three 3-level categorical variables with a rare category.

    All five variables are noisy replicates of one standard Gaussian latent
    variable (noise sd ``1/snr``). ``z1`` is its equal-count tertile cut.
    The rare label ``"a"`` of ``z2`` and ``z3`` goes to the same individuals,
    the ``round(n*f)`` lowest values of a further replicate; the remaining
    individuals are split at the median of an independent replicate for each
    variable. Finally one rare cell of ``z2`` or ``z3`` is deleted.
    """
    n_rare = int(round(n * f))
    if n * f < 1 or n_rare < 1:
        raise DataError("n*f must be at least 1")
    if n_rare > n - 2:
        raise DataError("rare category leaves too few other individuals")
    rng = np.random.default_rng(seed)
    labels = np.array(["a", "b", "c"], dtype=object)
    sd = 1.0 / snr
    latent = rng.standard_normal(n)

    def replicate():
        return latent + sd * rng.standard_normal(n)

    x1, x2 = replicate(), replicate()
    z1 = labels[equal_count_bins(replicate(), 3)]
    rare = np.zeros(n, dtype=bool)
    rare[np.argsort(replicate(), kind="stable")[:n_rare]] = True
    rest = np.flatnonzero(~rare)

    def linked():
        out = np.empty(n, dtype=object)
        out[rare] = RARE
        out[rest] = labels[1 + equal_count_bins(replicate()[rest], 2)]
        return out

    z2, z3 = linked(), linked()
    none = np.zeros(n, dtype=bool)
    truth = MixedDataset((
        Column("x1", Kind.CONTINUOUS, x1, none),
        Column("x2", Kind.CONTINUOUS, x2, none),
        Column("z1", Kind.CATEGORICAL, z1, none),
        Column("z2", Kind.CATEGORICAL, z2, none),
        Column("z3", Kind.CATEGORICAL, z3, none),
    ))
    row = int(rng.choice(np.flatnonzero(rare)))
    col = 3 + int(rng.integers(2))
    missing = np.zeros((n, 5), dtype=bool)
    missing[row, col] = True
    return Simulation(truth, truth.with_mask(missing), {"row": row, "col": col})


FACTORIAL = (
    ("a", "a", 1.0), ("b", "a", 2.0), ("c", "a", 3.0),
    ("a", "b", 2.0), ("b", "b", 3.0), ("c", "b", 1.0),
    ("a", "c", 3.0), ("b", "c", 1.0), ("c", "c", 2.0),
)


def gen_factorial(replicates: int) -> MixedDataset:
    """The 9-run 3^(3-1) design (defining relation I=123) stacked ``replicates`` times."""
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    rows = FACTORIAL * replicates
    none = np.zeros(len(rows), dtype=bool)
    return MixedDataset((
        Column("x1", Kind.CATEGORICAL, np.array([r[0] for r in rows], dtype=object), none),
        Column("x2", Kind.CATEGORICAL, np.array([r[1] for r in rows], dtype=object), none),
        Column("x3", Kind.CONTINUOUS, np.array([r[2] for r in rows]), none),
    ))
