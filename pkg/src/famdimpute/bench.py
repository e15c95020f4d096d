"""Monte-Carlo benchmark scenarios: generate, mask, impute, score.

Replicate ``r`` is seeded from ``seed + r`` so each one can be rerun alone.
Failures are recorded per replicate and do not stop the run.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import simgen
from .data_model import add_interaction
from .imputer import ImputeConfig, Use, impute, impute_subset, mean_impute
from .metrics import nrmse, pfc

SCENARIOS = ("toy", "rare", "factorial")
FIELDS = ("scenario", "replicate", "fraction", "strategy", "nrmse", "pfc",
          "iterations", "converged", "error")


@dataclass(frozen=True)
class Scenario:
    name: str
    replicates: int = 200
    fractions: tuple[float, ...] = (0.1, 0.2, 0.3)
    n: int | None = None
    f: float = 0.1
    snr: float | None = None
    ncp: int | None = None
    design_replicates: int = 20
    seed: int = 0
    regularized: bool = True

    def __post_init__(self):
        if self.name not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.name!r}; expected one of {SCENARIOS}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")

    def config(self, default_ncp: int) -> ImputeConfig:
        return ImputeConfig(s=self.ncp or default_ncp, regularized=self.regularized)


def _mask_seed(seed: int, k: int) -> int:
    return 1_000_003 * seed + k


def _row(sc, r, frac, strategy, e_cont=math.nan, e_cat=math.nan, res=None, error=""):
    return {
        "scenario": sc.name, "replicate": r, "fraction": frac, "strategy": strategy,
        "nrmse": e_cont, "pfc": e_cat,
        "iterations": res.iterations if res is not None else 0,
        "converged": int(res.converged) if res is not None else 0,
        "error": error,
    }


def _subset_truth(truth, completed, mask):
    idx = [truth.names.index(nm) for nm in completed.names]
    return truth.select(completed.names), mask[:, idx]


def _toy(sc: Scenario, r: int):
    spec = simgen.strategy_toy(n=sc.n or 100, snr=sc.snr or 3.0, seed=sc.seed + r)
    truth = simgen.gen_toy(spec)
    cfg = sc.config(2)
    rows = []
    for k, frac in enumerate(sc.fractions):
        data = simgen.mcar_mask(truth, simgen.MaskSpec(frac, _mask_seed(sc.seed + r, k)))
        mask = data.missing_mask()
        for use in Use:
            res = impute_subset(data, cfg, use)
            t, m = _subset_truth(truth, res.completed, mask)
            e_cont = nrmse(t, res.completed, m) if use is not Use.CATEGORICAL else math.nan
            e_cat = pfc(t, res.completed, m) if use is not Use.CONTINUOUS else math.nan
            rows.append(_row(sc, r, frac, use.value, e_cont, e_cat, res))
    return rows


def _rare(sc: Scenario, r: int):
    sim = simgen.gen_rare(sc.n or 1000, sc.f, seed=sc.seed + r, snr=sc.snr or 1.0)
    res = impute(sim.data, sc.config(2))
    return [_row(sc, r, math.nan, "both", math.nan, pfc(sim.truth, res.completed, sim.mask), res)]


def _factorial(sc: Scenario, r: int):
    truth = simgen.gen_factorial(sc.design_replicates)
    with_inter = add_interaction(truth, "x1", "x2")
    cfg = sc.config(4)
    rows = []
    for k, frac in enumerate(sc.fractions):
        mseed = _mask_seed(sc.seed + r, k)
        data = simgen.mcar_mask(truth, simgen.MaskSpec(frac, mseed))
        mask = data.missing_mask()
        res = impute(data, cfg)
        rows.append(_row(sc, r, frac, "famd", nrmse(truth, res.completed, mask),
                         pfc(truth, res.completed, mask), res))
        base = mean_impute(data)
        rows.append(_row(sc, r, frac, "proportion", nrmse(truth, base, mask), pfc(truth, base, mask)))
        # the interaction column is built on complete data, then masked with the rest
        data_i = simgen.mcar_mask(with_inter, simgen.MaskSpec(frac, mseed))
        mask_i = data_i.missing_mask()
        res_i = impute(data_i, cfg)
        scored = mask_i.copy()
        scored[:, 3:] = False
        rows.append(_row(sc, r, frac, "interaction", nrmse(with_inter, res_i.completed, scored),
                         pfc(with_inter, res_i.completed, scored), res_i))
    return rows


_RUNNERS = {"toy": _toy, "rare": _rare, "factorial": _factorial}


def run_replicate(args):
    sc, r = args
    try:
        return _RUNNERS[sc.name](sc, r)
    except Exception as exc:  # noqa: BLE001 - recorded, the run continues
        return [_row(sc, r, math.nan, "", error=f"{type(exc).__name__}: {exc}")]


def run(sc: Scenario, jobs: int = 1) -> list[dict]:
    """Per-replicate rows ordered by replicate index."""
    tasks = [(sc, r) for r in range(sc.replicates)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            chunks = list(pool.map(run_replicate, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        chunks = [run_replicate(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def aggregate(rows: list[dict]) -> list[dict]:
    """Mean NRMSE and PFC per (scenario, fraction, strategy) over successful replicates."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        if row["error"]:
            continue
        frac = row["fraction"]
        key = (row["scenario"], "" if isinstance(frac, float) and math.isnan(frac) else frac, row["strategy"])
        groups.setdefault(key, []).append(row)
    out = []
    for (scen, frac, strategy), grp in groups.items():
        with np.errstate(invalid="ignore"):
            e_cont = [g["nrmse"] for g in grp if not math.isnan(g["nrmse"])]
            e_cat = [g["pfc"] for g in grp if not math.isnan(g["pfc"])]
        out.append({
            "scenario": scen, "replicate": len(grp), "fraction": frac if frac != "" else math.nan,
            "strategy": strategy,
            "nrmse": float(np.mean(e_cont)) if e_cont else math.nan,
            "pfc": float(np.mean(e_cat)) if e_cat else math.nan,
            "iterations": float(np.mean([g["iterations"] for g in grp])),
            "converged": float(np.mean([g["converged"] for g in grp])),
            "error": "",
        })
    return out


def summary(rows: list[dict]) -> dict[tuple, dict]:
    """Aggregate rows keyed by ``(fraction, strategy)``."""
    out = {}
    for row in aggregate(rows):
        frac = row["fraction"]
        out[(None if isinstance(frac, float) and math.isnan(frac) else frac, row["strategy"])] = row
    return out
