"""Benchmark the numpy kernels against their numba twins.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat 5] [--grid 161] [--json out.json]

Reports best-of-N wall time per kernel and the numba speedup. Run with
PROJCURVE_BACKEND unset so both implementations are importable.
"""

import argparse
import itertools
import json
import sys
import time

import numpy as np

from projcurve import _kernels


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def make_workloads(grid, rng):
    xs = np.linspace(-1, 1, grid)
    X, Y = np.meshgrid(xs, xs)
    pts = (X + 1j * Y).ravel()

    poly_coeffs = rng.standard_normal((8, 7)) + 1j * rng.standard_normal((8, 7))

    comp = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    dcomp = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))

    q, P, L = 7, 4, 3
    det_coeffs = (rng.standard_normal((q, P, L))
                  + 1j * rng.standard_normal((q, P, L)))
    subsets = np.array(list(itertools.combinations(range(q), P)),
                       dtype=np.int64)

    a = rng.standard_normal((4, pts.size)) + 1j * rng.standard_normal((4, pts.size))
    b = rng.standard_normal((4, pts.size)) + 1j * rng.standard_normal((4, pts.size))

    return {
        "polyval_grid": (poly_coeffs, pts),
        "fs_derivative_grid": (comp, dcomp, pts),
        "detprod_grid": (det_coeffs, pts, subsets),
        "pairwise_fs_grid": (a, b),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5,
                        help="repetitions per kernel; best time wins")
    parser.add_argument("--grid", type=int, default=161,
                        help="per-axis grid resolution for the point set")
    parser.add_argument("--json", default=None,
                        help="also dump results to this JSON file")
    args = parser.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; nothing to compare", file=sys.stderr)
        return 1

    rng = np.random.default_rng(0)
    workloads = make_workloads(args.grid, rng)

    # compile outside the timed region
    _kernels.warmup()
    for name, work in workloads.items():
        getattr(_kernels, name + "_numba")(*work)

    results = {}
    print(f"{'kernel':<22}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, work in workloads.items():
        t_np = best_of(getattr(_kernels, name + "_numpy"), work, args.repeat)
        t_nb = best_of(getattr(_kernels, name + "_numba"), work, args.repeat)
        results[name] = {"numpy_s": t_np, "numba_s": t_nb,
                         "speedup": t_np / t_nb}
        print(f"{name:<22}{t_np * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms"
              f"{t_np / t_nb:>9.1f}x")

    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"grid": args.grid, "repeat": args.repeat,
                       "kernels": results}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
