"""Command-line interface: impute, cv, score, simulate, bench, analyze.

Exit codes: 0 success, 1 usage or parse error, 2 numerical failure,
3 partial benchmark failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import shlex
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bench, csvio, famd, kernels, simgen
from .data_model import DataError
from .imputer import ImputeConfig, impute
from .metrics import score
from .model_selection import cross_validate, default_grid

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_PARTIAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _manifest(path, args, argv, started, **extra):
    items = {
        "subcommand": args.command,
        "command": "famdimpute " + shlex.join(argv),
        "version": __version__,
        "kernels": kernels.BACKEND,
    }
    items.update(extra)
    items["duration_s"] = f"{time.perf_counter() - started:.3f}"
    csvio.write_manifest(path, items)


def _grid(text):
    if text is None:
        return None
    vals = set()
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            vals.update(range(int(lo), int(hi) + 1))
        elif part.strip():
            vals.add(int(part))
    return sorted(vals)


def _fractions(text):
    return tuple(float(v) for v in text.split(","))


def cmd_impute(args, argv, started):
    ds = csvio.read_dataset(args.input, na=args.na_token)
    regularized = not args.plain
    cv_note = {}
    if args.ncp == "auto":
        grid = _grid(args.grid) or default_grid(ds)
        rep = cross_validate(ds, grid=grid, folds=args.folds, deletion_fraction=args.deletion_fraction,
                             seed=args.seed, cfg=ImputeConfig(regularized=regularized, epsilon=args.eps,
                                                              max_iter=args.max_iter), jobs=args.jobs)
        s = rep.chosen_s
        cv_note = {"ncp_mode": "auto", "cv_grid": ",".join(map(str, rep.grid)), "cv_folds": args.folds,
                   "cv_deletion_fraction": args.deletion_fraction, "cv_seed": args.seed}
    else:
        try:
            s = int(args.ncp)
        except ValueError:
            raise UsageError(f"--ncp must be an integer or 'auto', got {args.ncp!r}") from None
        cv_note = {"ncp_mode": "fixed"}
    cfg = ImputeConfig(s=s, regularized=regularized, epsilon=args.eps, max_iter=args.max_iter)
    res = impute(ds, cfg, verbose=args.verbose)
    if args.verbose:
        for it, change, sigma2 in res.trace:
            print(f"iter={it} change={change:.17g} sigma2={sigma2:.17g}", file=sys.stderr)
    csvio.write_dataset(res.completed, args.out, na=args.na_token)
    outputs = [args.out]
    if args.fuzzy_out:
        csvio.write_fuzzy(res.fuzzy, args.fuzzy_out)
        outputs.append(args.fuzzy_out)
    _manifest(args.manifest or f"{args.out}.manifest", args, argv, started,
              inputs=args.input, outputs=",".join(outputs), ncp=s, regularized=int(regularized),
              epsilon=args.eps, max_iter=args.max_iter, iterations=res.iterations,
              converged=int(res.converged), final_change=f"{res.final_change:.17g}", **cv_note)
    if not res.converged:
        print(f"warning: no convergence after {res.iterations} iterations", file=sys.stderr)
    return EXIT_OK


def cmd_cv(args, argv, started):
    ds = csvio.read_dataset(args.input, na=args.na_token)
    rep = cross_validate(ds, grid=_grid(args.grid), folds=args.folds,
                         deletion_fraction=args.deletion_fraction, seed=args.seed,
                         cfg=ImputeConfig(regularized=not args.plain), jobs=args.jobs)
    if args.out:
        csvio.write_table(rep.rows(), ["S", "nrmse", "pfc", "combined"], args.out)
        _manifest(f"{args.out}.manifest", args, argv, started, inputs=args.input, outputs=args.out,
                  folds=args.folds, deletion_fraction=args.deletion_fraction, seed=args.seed,
                  chosen_s=rep.chosen_s)
    else:
        for row in rep.rows():
            print(",".join(csvio.format_real(v) if isinstance(v, float) else str(v) for v in row))
    print(f"chosen_s={rep.chosen_s}")
    return EXIT_OK


def cmd_score(args, argv, started):
    truth = csvio.read_dataset(args.truth, na=args.na_token)
    imputed = csvio.read_dataset(args.imputed, na=args.na_token)
    if (args.mask is None) == (args.incomplete is None):
        raise UsageError("give exactly one of --mask or --incomplete")
    if args.mask:
        names, mask = csvio.read_mask(args.mask)
        if names != truth.names:
            raise UsageError("mask header does not match the truth columns")
    else:
        mask = csvio.read_dataset(args.incomplete, na=args.na_token).missing_mask()
    rep = score(truth, imputed, mask)
    fmt = lambda v: "NA" if math.isnan(v) else csvio.format_real(v)  # noqa: E731
    print(f"nrmse={fmt(rep.nrmse)}")
    print(f"pfc={fmt(rep.pfc)}")
    print(f"n_scored_cont={rep.n_scored_cont}")
    print(f"n_scored_cat={rep.n_scored_cat}")
    if args.out:
        csvio.write_table([(rep.nrmse, rep.pfc, rep.n_scored_cont, rep.n_scored_cat)],
                          ["nrmse", "pfc", "n_scored_cont", "n_scored_cat"], args.out)
    return EXIT_OK


def cmd_simulate(args, argv, started):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.scenario == "toy":
        make = simgen.dimension_toy if args.design == "dimension" else simgen.strategy_toy
        kw = {"seed": args.seed}
        if args.n:
            kw["n"] = args.n
        if args.snr:
            kw["snr"] = args.snr
        truth = simgen.gen_toy(make(**kw))
        data = simgen.mcar_mask(truth, simgen.MaskSpec(args.fraction, args.seed))
    elif args.scenario == "rare":
        sim = simgen.gen_rare(args.n or 1000, args.f, seed=args.seed, snr=args.snr or 1.0)
        truth, data = sim.truth, sim.data
    else:
        truth = simgen.gen_factorial(args.design_replicates)
        data = simgen.mcar_mask(truth, simgen.MaskSpec(args.fraction, args.seed))
    paths = [out / "complete.csv", out / "masked.csv", out / "mask.csv"]
    csvio.write_dataset(truth, paths[0], na=args.na_token)
    csvio.write_dataset(data, paths[1], na=args.na_token)
    csvio.write_mask(data.missing_mask() & ~truth.missing_mask(), truth.names, paths[2])
    _manifest(out / "simulate.manifest", args, argv, started, outputs=",".join(map(str, paths)),
              scenario=args.scenario, seed=args.seed)
    return EXIT_OK


def cmd_bench(args, argv, started):
    sc = bench.Scenario(args.scenario, replicates=args.replicates, fractions=_fractions(args.fractions),
                        n=args.n, f=args.f, snr=args.snr, ncp=args.ncp,
                        design_replicates=args.design_replicates, seed=args.seed,
                        regularized=not args.plain)
    rows = bench.run(sc, jobs=args.jobs)
    agg = bench.aggregate(rows)
    table = [["replicate"] + [r[k] for k in bench.FIELDS] for r in rows]
    table += [["aggregate"] + [r[k] for k in bench.FIELDS] for r in agg]
    header = ["row"] + list(bench.FIELDS)
    if args.out:
        csvio.write_table(table, header, args.out)
        _manifest(f"{args.out}.manifest", args, argv, started, outputs=args.out, scenario=sc.name,
                  replicates=sc.replicates, seed=sc.seed)
    else:
        csvio.write_table(table, header, sys.stdout)
    for r in agg:
        print(f"{r['scenario']} fraction={r['fraction']} strategy={r['strategy']} "
              f"nrmse={r['nrmse']:.4f} pfc={r['pfc']:.4f}", file=sys.stderr)
    failed = sum(1 for r in rows if r["error"])
    if failed:
        print(f"{failed} replicate(s) failed", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_analyze(args, argv, started):
    ds = csvio.read_dataset(args.input, na=args.na_token)
    eig = famd.eigenvalues(ds)
    pct = 100 * eig / eig.sum()
    rows = list(zip(range(1, len(eig) + 1), eig, pct, np.cumsum(pct)))
    header = ["dimension", "eigenvalue", "percent", "cumulative"]
    if args.out:
        csvio.write_table(rows, header, args.out)
        _manifest(f"{args.out}.manifest", args, argv, started, inputs=args.input, outputs=args.out)
    else:
        csvio.write_table(rows, header, sys.stdout)
    print(f"total_inertia={csvio.format_real(eig.sum())}", file=sys.stderr)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="famdimpute", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    na = os.environ.get("FAMDIMPUTE_NA", "NA")

    def common(sp):
        sp.add_argument("--na-token", default=na, help="missing-value token (env FAMDIMPUTE_NA)")

    sp = sub.add_parser("impute", help="impute a typed CSV")
    sp.add_argument("input")
    sp.add_argument("--ncp", default="2", help="retained dimensions, or 'auto' for cross-validation")
    sp.add_argument("--plain", action="store_true", help="unregularized variant")
    sp.add_argument("--eps", type=float, default=1e-6)
    sp.add_argument("--max-iter", type=int, default=1000)
    sp.add_argument("--out", required=True)
    sp.add_argument("--fuzzy-out")
    sp.add_argument("--manifest")
    sp.add_argument("--grid", help="candidate ranks for --ncp auto, e.g. 1-5")
    sp.add_argument("--folds", type=int, default=5)
    sp.add_argument("--deletion-fraction", type=float, default=0.05)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-v", "--verbose", action="store_true", help="per-iteration trace on stderr")
    common(sp)
    sp.set_defaults(func=cmd_impute)

    sp = sub.add_parser("cv", help="choose the number of dimensions by cross-validation")
    sp.add_argument("input")
    sp.add_argument("--grid")
    sp.add_argument("--folds", type=int, default=5)
    sp.add_argument("--deletion-fraction", type=float, default=0.05)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--plain", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_cv)

    sp = sub.add_parser("score", help="NRMSE and PFC of an imputation")
    sp.add_argument("--truth", required=True)
    sp.add_argument("--imputed", required=True)
    sp.add_argument("--mask", help="CSV of 0/1 with a header row; 1 = scored")
    sp.add_argument("--incomplete", help="the incomplete input; its missing cells are scored")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("simulate", help="write complete, masked and mask CSVs")
    sp.add_argument("--scenario", choices=bench.SCENARIOS, default="toy")
    sp.add_argument("--design", choices=("strategy", "dimension"), default="strategy")
    sp.add_argument("--n", type=int)
    sp.add_argument("--snr", type=float)
    sp.add_argument("--f", type=float, default=0.1)
    sp.add_argument("--fraction", type=float, default=0.2)
    sp.add_argument("--design-replicates", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-dir", required=True)
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bench", help="run a Monte-Carlo scenario")
    sp.add_argument("--scenario", choices=bench.SCENARIOS, required=True)
    sp.add_argument("--replicates", type=int, default=200)
    sp.add_argument("--fractions", default="0.1,0.2,0.3")
    sp.add_argument("--n", type=int)
    sp.add_argument("--f", type=float, default=0.1)
    sp.add_argument("--snr", type=float)
    sp.add_argument("--ncp", type=int)
    sp.add_argument("--design-replicates", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--plain", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("analyze", help="FAMD eigenvalues of a complete dataset")
    sp.add_argument("input")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    started = time.perf_counter()
    try:
        return args.func(args, argv, started)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, DataError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
