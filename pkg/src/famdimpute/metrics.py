"""Imputation-quality criteria: NRMSE for continuous cells, PFC for categorical cells."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import DataError, MixedDataset


class NothingToScore(DataError):
    pass


@dataclass(frozen=True)
class ErrorReport:
    nrmse: float
    pfc: float
    n_scored_cont: int
    n_scored_cat: int


def _check(truth: MixedDataset, imputed: MixedDataset, mask) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    if truth.names != imputed.names or truth.n_rows != imputed.n_rows:
        raise DataError("truth and imputed datasets have different shapes")
    if mask.shape != (truth.n_rows, len(truth.columns)):
        raise DataError(f"mask shape {mask.shape} does not match dataset")
    for k, (t, h) in enumerate(zip(truth.columns, imputed.columns)):
        if np.any(mask[:, k] & (t.missing | h.missing)):
            raise DataError(f"scored cell without a value in column {t.name!r}")
    return mask


def nrmse(truth: MixedDataset, imputed: MixedDataset, mask) -> float:
    """Root mean of squared errors standardized by each true variable's
    population standard deviation, over the scored continuous cells."""
    mask = _check(truth, imputed, mask)
    num, den = 0.0, 0
    for k, (t, h) in enumerate(zip(truth.columns, imputed.columns)):
        sel = mask[:, k]
        if not t.is_continuous or not sel.any():
            continue
        sd = np.std(t.values[~t.missing])
        if sd == 0:
            raise DataError(f"constant true variable {t.name!r}")
        num += float(np.sum(((t.values[sel] - h.values[sel]) / sd) ** 2))
        den += int(sel.sum())
    if den == 0:
        raise NothingToScore("nothing to score: no masked continuous cells")
    return float(np.sqrt(num / den))


def pfc(truth: MixedDataset, imputed: MixedDataset, mask) -> float:
    """Proportion of scored categorical cells imputed with a wrong label."""
    mask = _check(truth, imputed, mask)
    wrong, total = 0, 0
    for k, (t, h) in enumerate(zip(truth.columns, imputed.columns)):
        sel = mask[:, k]
        if t.is_continuous or not sel.any():
            continue
        wrong += int(np.sum(t.values[sel] != h.values[sel]))
        total += int(sel.sum())
    if total == 0:
        raise NothingToScore("nothing to score: no masked categorical cells")
    return wrong / total


def score(truth: MixedDataset, imputed: MixedDataset, mask) -> ErrorReport:
    """Both criteria; a criterion with no scored cells is reported as NaN."""
    mask = np.asarray(mask, dtype=bool)
    kinds = np.array([c.is_continuous for c in truth.columns])
    n_cont = int(mask[:, kinds].sum())
    n_cat = int(mask[:, ~kinds].sum())
    e_cont = nrmse(truth, imputed, mask) if n_cont else float("nan")
    e_cat = pfc(truth, imputed, mask) if n_cat else float("nan")
    return ErrorReport(e_cont, e_cat, n_cont, n_cat)
