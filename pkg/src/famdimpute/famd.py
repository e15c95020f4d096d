"""Linear algebra of factorial analysis of mixed data (FAMD).

Continuous columns are standardized by their population standard deviation,
dummy columns are divided by the square root of their proportion, the
weighted matrix is centered and decomposed by a dense SVD.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .data_model import DataError, MixedDataset, encode


class NumericalError(ArithmeticError):
    """Raised on degenerate weights or non-finite matrices."""


@dataclass(frozen=True, eq=False)
class FamdWeights:
    d_sigma: np.ndarray
    m: np.ndarray
    is_continuous: np.ndarray

    @property
    def sqrt_d(self) -> np.ndarray:
        return np.sqrt(self.d_sigma)


@dataclass(frozen=True, eq=False)
class FamdModel:
    u: np.ndarray
    v: np.ndarray
    lam: np.ndarray
    weights: FamdWeights
    sigma2: float = 0.0

    @property
    def s(self) -> int:
        return len(self.lam)


def proportion_floor(n_rows: int) -> float:
    return 1.0 / (100.0 * n_rows)


def compute_weights(x: np.ndarray, is_continuous, floor: bool = True) -> FamdWeights:
    """Variances of continuous columns and proportions of dummy columns.

    With ``floor`` the proportions are clamped at ``1/(100 I)``; fuzzy
    memberships can drive a margin towards zero during the iterations.
    """
    x = np.ascontiguousarray(x, dtype=float)
    is_cont = np.asarray(is_continuous, dtype=bool)
    mean, var = kernels.column_moments(x)
    if np.any(var[is_cont] <= 0.0):
        raise NumericalError("degenerate weight: continuous column with zero variance")
    p = mean[~is_cont]
    if np.any(p == 0.0) or (not floor and np.any(p <= 0.0)):
        raise NumericalError("degenerate weight: dummy column with zero proportion")
    if floor:
        p = np.maximum(p, proportion_floor(x.shape[0]))
    d = np.where(is_cont, var, 0.0)
    d[~is_cont] = p
    m = mean / np.sqrt(d)
    return FamdWeights(d, m, is_cont)


def weighted_center(x: np.ndarray, weights: FamdWeights) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=float)
    return kernels.center(x, weights.sqrt_d, weights.m)


def svd(z: np.ndarray):
    """Thin SVD with a fixed sign convention.

    Returns ``(u, lam, v)`` where ``lam`` holds the squared singular values in
    nonincreasing order and the largest-magnitude entry of every right
    singular vector is positive.
    """
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise NumericalError("non-finite entries in matrix to decompose")
    u, sv, vt = np.linalg.svd(z, full_matrices=False)
    v = vt.T
    pivot = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[pivot, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, sv ** 2, v * signs


def svd_truncated(z: np.ndarray, s: int):
    """Leading ``s`` factors of :func:`svd`."""
    z = np.asarray(z, dtype=float)
    if s < 1 or s > min(z.shape[0] - 1, z.shape[1]):
        raise ValueError(f"rank {s} outside [1, min(I-1, J)] for a {z.shape} matrix")
    u, lam, v = svd(z)
    return u[:, :s], lam[:s], v[:, :s]


def shrunk_singular_values(lam: np.ndarray, sigma2: float) -> np.ndarray:
    """(lambda - sigma2)/sqrt(lambda), clamped at zero."""
    lam = np.asarray(lam, dtype=float)
    if sigma2 == 0:
        return np.sqrt(np.maximum(lam, 0.0))
    out = np.zeros_like(lam)
    keep = lam > sigma2
    out[keep] = (lam[keep] - sigma2) / np.sqrt(lam[keep])
    return out


def singular_value_scale(model: FamdModel, regularized: bool) -> np.ndarray:
    if regularized:
        return shrunk_singular_values(model.lam, model.sigma2)
    return np.sqrt(model.lam)


def reconstruct(model: FamdModel, regularized: bool = False) -> np.ndarray:
    """Fitted matrix back in the scale of X."""
    scale = singular_value_scale(model, regularized)
    w8 = model.weights
    return ((model.u * scale) @ model.v.T + w8.m) * w8.sqrt_d


def estimate_sigma2(all_lambda, s: int, j: int, k2: int) -> float:
    """Mean of the eigenvalues ranked s+1 .. J-K2 (zero-padded)."""
    top = j - k2
    if s >= top:
        raise ValueError(f"no residual dimensions: s={s} >= J-K2={top}")
    lam = np.zeros(top)
    given = np.asarray(all_lambda, dtype=float)[:top]
    lam[:len(given)] = given
    return float(lam[s:].mean())


def fit(x: np.ndarray, is_continuous, s: int, k2: int, regularized: bool = True,
        sigma2: float | None = None, floor: bool = True) -> FamdModel:
    """Weights, centering and SVD of a completed matrix, truncated at ``s``."""
    weights = compute_weights(x, is_continuous, floor=floor)
    u, lam, v = svd(weighted_center(x, weights))
    if sigma2 is None:
        sigma2 = estimate_sigma2(lam, s, x.shape[1], k2) if regularized else 0.0
    return FamdModel(u[:, :s], v[:, :s], lam[:s], weights, sigma2)


def _complete_expansion(ds: MixedDataset):
    if not ds.is_complete():
        raise DataError("operation needs a complete dataset")
    return encode(ds)


def eigenvalues(ds: MixedDataset) -> np.ndarray:
    """FAMD eigenvalues (inertia per dimension) of a complete dataset.

    These are the squared singular values divided by I; the nontrivial ones
    sum to K1 + sum(q_k - 1).
    """
    exp = _complete_expansion(ds)
    w8 = compute_weights(exp.x, exp.is_continuous, floor=False)
    _, lam, _ = svd(weighted_center(exp.x, w8))
    top = min(exp.J - exp.n_categorical, ds.n_rows - 1)
    return lam[:top] / ds.n_rows


def famd_distance(ds: MixedDataset, i: int, i2: int) -> float:
    """Squared FAMD distance between two individuals."""
    exp = _complete_expansion(ds)
    w8 = compute_weights(exp.x, exp.is_continuous, floor=False)
    diff = exp.x[i] - exp.x[i2]
    return float(np.sum(diff ** 2 / w8.d_sigma))


def link_criterion(ds: MixedDataset, f) -> float:
    """Sum of R^2 with continuous variables plus eta^2 with categorical ones."""
    if not ds.is_complete():
        raise DataError("operation needs a complete dataset")
    f = np.asarray(f, dtype=float)
    if np.ptp(f) == 0.0:
        raise ValueError("constant score vector")
    fc = f - f.mean()
    total = float(fc @ fc)
    crit = 0.0
    for c in ds.continuous:
        xc = c.values - c.values.mean()
        crit += float(xc @ fc) ** 2 / (float(xc @ xc) * total)
    for c in ds.categorical:
        between = 0.0
        for lab in c.categories():
            sel = c.values == lab
            between += sel.sum() * fc[sel].mean() ** 2
        crit += between / total
    return crit
