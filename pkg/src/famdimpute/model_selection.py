"""Cross-validated choice of the number of retained dimensions.

Each fold hides an extra random fraction of the observed cells, imputes the
dataset for every candidate rank and scores the hidden cells against their
known values. The combined error is NRMSE + PFC with equal weight.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .data_model import DataError, MixedDataset, encode
from .imputer import ImputeConfig, impute, max_rank
from .metrics import score


@dataclass(frozen=True)
class CvReport:
    grid: tuple[int, ...]
    nrmse: tuple[float, ...]
    pfc: tuple[float, ...]
    combined: tuple[float, ...]
    chosen_s: int
    folds: int
    deletion_fraction: float
    seed: int

    def rows(self):
        return list(zip(self.grid, self.nrmse, self.pfc, self.combined))


def default_grid(ds: MixedDataset, upper: int = 10) -> list[int]:
    exp = encode(ds)
    return list(range(1, min(upper, max_rank(exp), exp.J - exp.n_categorical - 1) + 1))


def _viable(ds: MixedDataset, missing: np.ndarray) -> bool:
    for k, c in enumerate(ds.columns):
        obs = c.values[~missing[:, k]]
        if len(obs) < 2 or len(set(obs.tolist())) < 2:
            return False
    return True


def fold_masks(ds: MixedDataset, folds: int, deletion_fraction: float, seed: int,
               retries: int = 100) -> list[np.ndarray]:
    """Boolean I x K masks of the observed cells hidden in each fold."""
    base = ds.missing_mask()
    observed = np.flatnonzero(~base.ravel())
    count = max(1, int(np.floor(deletion_fraction * len(observed) + 0.5)))
    rng = np.random.default_rng(seed)
    masks = []
    for _ in range(folds):
        for _ in range(retries):
            held = np.zeros(base.size, dtype=bool)
            held[rng.choice(observed, size=count, replace=False)] = True
            held = held.reshape(base.shape)
            if _viable(ds, base | held):
                masks.append(held)
                break
        else:
            raise DataError("cross-validation fold would empty a column; lower deletion_fraction")
    return masks


def _evaluate(args):
    ds, held, s, cfg = args
    data = ds.with_mask(ds.missing_mask() | held)
    res = impute(data, replace(cfg, s=s))
    rep = score(ds, res.completed, held)
    return rep.nrmse, rep.pfc


def cross_validate(ds: MixedDataset, grid=None, folds: int = 5, deletion_fraction: float = 0.05,
                   seed: int = 0, cfg: ImputeConfig | None = None, jobs: int = 1) -> CvReport:
    cfg = cfg or ImputeConfig()
    grid = sorted(set(default_grid(ds) if grid is None else grid))
    if not grid:
        raise ValueError("empty grid")
    if not 0 < deletion_fraction <= 0.5:
        raise ValueError("deletion_fraction must be in (0, 0.5]")
    if folds < 1:
        raise ValueError("folds must be >= 1")
    exp = encode(ds)
    top = exp.J - exp.n_categorical
    if cfg.regularized and cfg.sigma2 is None and grid[-1] > top - 1:
        raise ValueError(f"grid values must be <= J-K2-1 = {top - 1}")

    masks = fold_masks(ds, folds, deletion_fraction, seed)
    tasks = [(ds, held, s, cfg) for held in masks for s in grid]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_evaluate, tasks))
    else:
        results = [_evaluate(t) for t in tasks]
    res = np.array(results, dtype=float).reshape(folds, len(grid), 2)

    has_cont = bool(ds.continuous)
    has_cat = bool(ds.categorical)
    with np.errstate(invalid="ignore"):
        e_cont = np.nanmean(res[:, :, 0], axis=0) if has_cont else np.zeros(len(grid))
        e_cat = np.nanmean(res[:, :, 1], axis=0) if has_cat else np.zeros(len(grid))
    # a kind never hidden in any fold contributes nothing
    e_cont = np.nan_to_num(e_cont, nan=0.0)
    e_cat = np.nan_to_num(e_cat, nan=0.0)
    combined = e_cont + e_cat
    if not np.all(np.isfinite(combined)):
        raise ArithmeticError("non-finite cross-validation error")
    chosen = grid[int(np.argmin(combined))]  # argmin keeps the first, i.e. smallest, on ties
    return CvReport(tuple(grid), tuple(e_cont.tolist()), tuple(e_cat.tolist()),
                    tuple(combined.tolist()), chosen, folds, deletion_fraction, seed)
