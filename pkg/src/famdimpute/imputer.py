"""Iterative (regularized) FAMD imputation."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import famd, kernels
from .data_model import (DataError, FuzzyIndicator, IndicatorExpansion, MixedDataset,
                         decode, encode)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ImputeConfig:
    """Settings of one imputation run.

    ``sigma2`` overrides the noise variance estimated from the trailing
    eigenvalues (regularized variant only). ``seed`` is unused by the
    deterministic algorithm.
    """

    s: int = 2
    regularized: bool = True
    epsilon: float = 1e-6
    max_iter: int = 1000
    sigma2: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.sigma2 is not None and self.sigma2 < 0:
            raise ValueError("sigma2 must be >= 0")


@dataclass(frozen=True, eq=False)
class ImputationResult:
    completed: MixedDataset
    fuzzy: FuzzyIndicator
    iterations: int
    final_change: float
    converged: bool
    trace: list = field(default_factory=list, repr=False)


class Use(str, Enum):
    CONTINUOUS = "continuous"
    CATEGORICAL = "categorical"
    BOTH = "both"


def initialize(exp: IndicatorExpansion) -> np.ndarray:
    """Fill missing cells with observed means (continuous) or proportions (dummies)."""
    x, w = exp.x, exp.w
    n_obs = w.sum(axis=0)
    if np.any(n_obs == 0):
        bad = sorted({exp.layout[j][0] for j in np.flatnonzero(n_obs == 0)})
        raise DataError(f"column has no observed data: {', '.join(bad)}")
    fill = (x * w).sum(axis=0) / n_obs
    return np.where(w > 0, x, fill)


def max_rank(exp: IndicatorExpansion) -> int:
    return min(exp.x.shape[0] - 1, exp.J - exp.n_categorical)


def impute(ds: MixedDataset, cfg: ImputeConfig = ImputeConfig(), verbose: bool = False) -> ImputationResult:
    exp = encode(ds)
    k2 = exp.n_categorical
    top = exp.J - k2
    limit = max_rank(exp)
    if cfg.regularized and cfg.sigma2 is None:
        limit = min(limit, top - 1)
    if cfg.s > limit:
        raise ValueError(f"s={cfg.s} too large for this dataset (maximum {limit})")

    is_cont = exp.is_continuous
    w = np.ascontiguousarray(exp.w)
    x_obs = np.ascontiguousarray(exp.x)
    x = initialize(exp)
    xhat_prev = x
    trace = []
    missing_any = bool((w == 0).any())

    iterations, change, converged = 0, float("nan"), False
    for it in range(1, cfg.max_iter + 1):
        model = famd.fit(x, is_cont, cfg.s, k2, regularized=cfg.regularized, sigma2=cfg.sigma2)
        scale = famd.singular_value_scale(model, cfg.regularized)
        us = np.ascontiguousarray(model.u * scale)
        vt = np.ascontiguousarray(model.v.T)
        w8 = model.weights
        xhat, x, change = kernels.reconstruct_blend(us, vt, w8.m, w8.sqrt_d, x_obs, w, xhat_prev)
        iterations = it
        trace.append((it, change, model.sigma2))
        if verbose:
            log.debug("iter=%d change=%.6g sigma2=%.6g", it, change, model.sigma2)
        if not np.isfinite(change):
            raise famd.NumericalError(f"non-finite change at iteration {it}")
        if not missing_any:
            change, converged = 0.0, True
            break
        if change <= cfg.epsilon:
            converged = True
            break
        xhat_prev = xhat

    # observed cells are copied bitwise, never through the blend arithmetic
    x = np.where(w > 0, x_obs, x)
    fuzzy = FuzzyIndicator(x, w == 0, exp.layout, exp.blocks)
    return ImputationResult(decode(fuzzy, ds), fuzzy, iterations, change, converged, trace)


def restrict(ds: MixedDataset, use: Use | str) -> MixedDataset:
    use = Use(use)
    if use is Use.BOTH:
        cols = ds.columns
    elif use is Use.CONTINUOUS:
        cols = tuple(ds.continuous)
    else:
        cols = tuple(ds.categorical)
    if not cols:
        raise DataError(f"restricting to {use.value} variables leaves no columns")
    return MixedDataset(cols)


def impute_subset(ds: MixedDataset, cfg: ImputeConfig, use: Use | str) -> ImputationResult:
    """Impute using only the continuous, only the categorical, or all columns."""
    return impute(restrict(ds, use), cfg)


def mean_impute(ds: MixedDataset) -> MixedDataset:
    """Baseline: observed mean for continuous cells, most frequent observed
    category (first in sorted order on ties) for categorical cells."""
    cols = []
    for c in ds.columns:
        if c.is_continuous:
            fill = c.observed.mean()
        else:
            cats = c.categories()
            counts = [int(np.sum(c.observed == k)) for k in cats]
            fill = cats[int(np.argmax(counts))]
        vals = np.where(c.missing, fill, c.values)
        cols.append(type(c)(c.name, c.kind, vals, np.zeros(len(c), dtype=bool)))
    return MixedDataset(tuple(cols))
