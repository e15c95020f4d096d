import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from famdimpute import kernels

py = kernels.get_backend("python")
try:
    cy = kernels.get_backend("cython")
except ImportError:  # extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled kernels not built")


def _inputs(seed, n, j, s):
    rng = np.random.default_rng(seed)
    us = rng.standard_normal((n, s))
    vt = rng.standard_normal((s, j))
    m = rng.standard_normal(j)
    sqrt_d = rng.uniform(0.1, 3.0, j)
    x = rng.standard_normal((n, j))
    w = (rng.random((n, j)) > 0.3).astype(float)
    prev = rng.standard_normal((n, j))
    return us, vt, m, sqrt_d, x, w, prev


@needs_ext
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 40), st.integers(1, 12), st.integers(1, 4))
def test_backends_agree_on_blend(seed, n, j, s):
    args = _inputs(seed, n, j, s)
    a = py.reconstruct_blend(*args)
    b = cy.reconstruct_blend(*args)
    np.testing.assert_allclose(b[0], a[0], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(b[1], a[1], rtol=1e-12, atol=1e-12)
    assert b[2] == pytest.approx(a[2], rel=1e-10)


@needs_ext
def test_backends_agree_without_previous():
    args = _inputs(3, 10, 5, 2)[:-1] + (None,)
    for mod in (py, cy):
        assert np.isnan(mod.reconstruct_blend(*args)[2])


@needs_ext
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 50), st.integers(1, 10))
def test_backends_agree_on_moments_and_center(seed, n, j):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, j)) * 5 + 2
    for u, v in zip(py.column_moments(x), cy.column_moments(x)):
        np.testing.assert_allclose(v, u, rtol=1e-12, atol=1e-12)
    sqrt_d, m = rng.uniform(0.5, 2, j), rng.standard_normal(j)
    np.testing.assert_allclose(cy.center(x, sqrt_d, m), py.center(x, sqrt_d, m), rtol=1e-14)


def test_blend_keeps_observed_cells():
    us, vt, m, sqrt_d, x, w, prev = _inputs(1, 8, 4, 2)
    _, xnew, _ = py.reconstruct_blend(us, vt, m, sqrt_d, x, w, prev)
    assert np.array_equal(xnew[w == 1], x[w == 1])


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_env_forces_fallback():
    env = dict(os.environ, FAMDIMPUTE_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from famdimpute import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
