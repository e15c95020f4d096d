import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from famdimpute.data_model import Column, DataError, Kind, MixedDataset
from famdimpute.metrics import NothingToScore, nrmse, pfc, score

from conftest import random_mixed


def _cont(name, v):
    return Column(name, Kind.CONTINUOUS, np.asarray(v, float), np.zeros(len(v), bool))


def _cat(name, v):
    return Column(name, Kind.CATEGORICAL, np.asarray(v, dtype=object), np.zeros(len(v), bool))


def test_nrmse_by_hand():
    truth = MixedDataset((_cont("x", [0.0, 2.0, 4.0, 6.0]),))
    imp = MixedDataset((_cont("x", [0.0, 3.0, 4.0, 4.0]),))
    mask = np.array([[False], [True], [False], [True]])
    sd = math.sqrt(5.0)  # population sd of 0,2,4,6
    expected = math.sqrt(((1 / sd) ** 2 + (2 / sd) ** 2) / 2)
    assert nrmse(truth, imp, mask) == pytest.approx(expected, rel=1e-14)


def test_pfc_by_hand():
    truth = MixedDataset((_cat("z", list("aabbc")),))
    imp = MixedDataset((_cat("z", list("abbcc")),))
    mask = np.ones((5, 1), bool)
    assert pfc(truth, imp, mask) == 2 / 5


def test_perfect_imputation(rng):
    ds = random_mixed(rng, n=40)
    mask = rng.random((40, 5)) < 0.3
    rep = score(ds, ds, mask)
    assert rep.nrmse == 0.0 and rep.pfc == 0.0


def test_unscored_cells_do_not_matter(rng):
    ds = random_mixed(rng, n=30)
    mask = np.zeros((30, 5), bool)
    mask[:5] = True
    wrong = MixedDataset(tuple(
        Column(c.name, c.kind, np.concatenate([c.values[:5], c.values[5:][::-1]]), c.missing)
        for c in ds.columns))
    rep = score(ds, wrong, mask)
    assert rep.nrmse == 0.0 and rep.pfc == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.01, 1e4), st.floats(-1e3, 1e3))
def test_nrmse_affine_invariance(seed, a, b):
    rng = np.random.default_rng(seed)
    t, h = rng.standard_normal(30), rng.standard_normal(30)
    mask = np.zeros((30, 1), bool)
    mask[::3] = True
    base = nrmse(MixedDataset((_cont("x", t),)), MixedDataset((_cont("x", h),)), mask)
    moved = nrmse(MixedDataset((_cont("x", a * t + b),)), MixedDataset((_cont("x", a * h + b),)), mask)
    assert moved == pytest.approx(base, rel=1e-8)


def test_pfc_relabel_invariance(rng):
    t = rng.choice(list("abc"), 50)
    h = rng.choice(list("abc"), 50)
    mask = np.ones((50, 1), bool)
    rename = {"a": "q", "b": "r", "c": "s"}
    base = pfc(MixedDataset((_cat("z", t),)), MixedDataset((_cat("z", h),)), mask)
    moved = pfc(MixedDataset((_cat("z", [rename[v] for v in t]),)),
                MixedDataset((_cat("z", [rename[v] for v in h]),)), mask)
    assert base == moved


def test_streaming_matches_batch(rng):
    n = 400
    t, h = rng.standard_normal(n) * 3, rng.standard_normal(n)
    mask = rng.random((n, 1)) < 0.5
    batch = nrmse(MixedDataset((_cont("x", t),)), MixedDataset((_cont("x", h),)), mask)
    sd = np.std(t)
    acc, cnt = 0.0, 0
    for i in np.flatnonzero(mask[:, 0]):
        acc += ((t[i] - h[i]) / sd) ** 2
        cnt += 1
    assert batch == pytest.approx(math.sqrt(acc / cnt), abs=1e-12)


def test_score_reports_nan_for_unscored_kind():
    truth = MixedDataset((_cont("x", [1, 2, 3]), _cat("z", list("abb"))))
    mask = np.array([[True, False], [False, False], [False, False]])
    rep = score(truth, truth, mask)
    assert rep.nrmse == 0.0 and math.isnan(rep.pfc)
    assert (rep.n_scored_cont, rep.n_scored_cat) == (1, 0)


def test_errors():
    truth = MixedDataset((_cont("x", [1, 2, 3]), _cat("z", list("abb"))))
    with pytest.raises(NothingToScore):
        nrmse(truth, truth, np.zeros((3, 2), bool))
    with pytest.raises(NothingToScore):
        pfc(truth, truth, np.zeros((3, 2), bool))
    with pytest.raises(DataError):
        nrmse(truth, truth, np.zeros((2, 2), bool))
    other = MixedDataset((_cont("y", [1, 2, 3]), _cat("z", list("abb"))))
    with pytest.raises(DataError):
        nrmse(truth, other, np.ones((3, 2), bool))
    holes = MixedDataset((Column.continuous("x", [1, None, 3]), _cat("z", list("abb"))))
    with pytest.raises(DataError, match="without a value"):
        nrmse(truth, holes, np.array([[False, False], [True, False], [False, False]]))
