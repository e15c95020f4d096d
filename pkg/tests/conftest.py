import numpy as np
import pytest

from famdimpute import simgen
from famdimpute.data_model import Column, Kind, MixedDataset


def random_mixed(rng, n=60, k1=3, k2=2, qmax=4, missing=0.0):
    """Random valid mixed dataset, optionally MCAR-masked."""
    cols = []
    latent = rng.standard_normal(n)
    for k in range(k1):
        cols.append(Column(f"x{k + 1}", Kind.CONTINUOUS,
                           latent * rng.uniform(0, 2) + rng.standard_normal(n) * rng.uniform(0.1, 5) + rng.uniform(-5, 5),
                           np.zeros(n, bool)))
    for k in range(k2):
        q = int(rng.integers(2, qmax + 1))
        idx = (np.arange(n) % q)
        rng.shuffle(idx)
        labels = np.array([f"l{v}" for v in idx], dtype=object)
        cols.append(Column(f"z{k + 1}", Kind.CATEGORICAL, labels, np.zeros(n, bool)))
    ds = MixedDataset(tuple(cols))
    if missing:
        ds = simgen.mcar_mask(ds, simgen.MaskSpec(missing, int(rng.integers(2**31))))
    return ds


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def small_mixed():
    return MixedDataset((
        Column.continuous("x1", [1.0, 2.0, None, 4.0, 5.0, 3.0]),
        Column.continuous("x2", [2.0, 4.1, 6.0, None, 9.8, 6.1]),
        Column.categorical("z1", ["a", "b", "a", "b", None, "a"]),
        Column.categorical("z2", ["u", "v", "w", "u", "v", None]),
    ))
