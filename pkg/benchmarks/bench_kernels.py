"""Time the compiled and numpy kernel backends on the per-iteration blend
and on whole imputations.

    python3 benchmarks/bench_kernels.py --sizes 200x20,2000x60 --repeat 20
"""
import argparse
import time

import numpy as np

from famdimpute import kernels, simgen
from famdimpute.imputer import ImputeConfig, impute


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def blend_case(n, j, s, repeat, backends):
    rng = np.random.default_rng(0)
    us = rng.standard_normal((n, s))
    vt = rng.standard_normal((s, j))
    m, sqrt_d = rng.standard_normal(j), rng.uniform(0.1, 2, j)
    x = rng.standard_normal((n, j))
    w = (rng.random((n, j)) > 0.2).astype(float)
    prev = rng.standard_normal((n, j))
    return {name: _time(lambda mod=mod: mod.reconstruct_blend(us, vt, m, sqrt_d, x, w, prev), repeat)
            for name, mod in backends.items()}


def impute_case(n, repeat, backends):
    truth = simgen.gen_toy(simgen.strategy_toy(n=n, seed=1))
    data = simgen.mcar_mask(truth, simgen.MaskSpec(0.2, 1))
    out = {}
    saved = kernels.reconstruct_blend
    try:
        for name, mod in backends.items():
            kernels.reconstruct_blend = mod.reconstruct_blend
            out[name] = _time(lambda: impute(data, ImputeConfig(s=2)), repeat)
    finally:
        kernels.reconstruct_blend = saved
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100x16,1000x40,5000x80")
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    backends = {"python": kernels.get_backend("python")}
    try:
        backends["cython"] = kernels.get_backend("cython")
    except ImportError:
        print("compiled backend not available; timing the numpy fallback only")

    print("kernel  size  " + "  ".join(f"{b:>10}" for b in backends) + "  speedup")
    for size in args.sizes.split(","):
        n, j = map(int, size.split("x"))
        t = blend_case(n, j, args.rank, args.repeat, backends)
        ratio = t["python"] / t["cython"] if "cython" in t else float("nan")
        print(f"blend   {size}  " + "  ".join(f"{v * 1e3:9.3f}ms" for v in t.values()) + f"  {ratio:.2f}x")
    for n in (100, 1000):
        t = impute_case(n, max(1, args.repeat // 4), backends)
        ratio = t["python"] / t["cython"] if "cython" in t else float("nan")
        print(f"impute  n={n}  " + "  ".join(f"{v * 1e3:9.1f}ms" for v in t.values()) + f"  {ratio:.2f}x")


if __name__ == "__main__":
    main()
