"""Compare the numba and numpy build kernels on large synthetic panels.

Usage: python benchmarks/bench_kernels.py [--h 4000] [--w 1000] [--sigma 4]

Times the full PBWT matrix pass, per-column forward tables and run-boundary
extraction through both backends and reports the speedup. The jit warm-up
call is excluded from the timings.
"""

import argparse
import time

import numpy as np

from pbwtstep import kernels


def panel_matrix(rng, h, w, sigma):
    """Blocky panel: mutated copies of a few base rows, so runs are realistic."""
    n_base = max(2, h // 50)
    bases = rng.integers(0, sigma, size=(n_base, w))
    mat = bases[rng.integers(0, n_base, size=h)].copy()
    mut = rng.random(size=mat.shape) < 0.02
    mat[mut] = rng.integers(0, sigma, size=int(mut.sum()))
    return mat.astype(np.int64)


def run_backend(impls, mat, sigma, repeats=3):
    best = {}
    for _ in range(repeats):
        t0 = time.perf_counter()
        pbwt, pa = impls["pbwt_matrix"](mat, sigma)
        t1 = time.perf_counter()
        for j in range(mat.shape[1]):
            impls["fore_column"](pbwt[:, j].copy(), sigma, 0)
        t2 = time.perf_counter()
        runs = 0
        for j in range(mat.shape[1]):
            runs += impls["run_starts"](pbwt[:, j].copy()).size
        t3 = time.perf_counter()
        for key, dt in (("pbwt_matrix", t1 - t0), ("fore_columns", t2 - t1),
                        ("run_starts", t3 - t2)):
            best[key] = min(best.get(key, dt), dt)
    return best, runs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--h", type=int, default=4000)
    ap.add_argument("--w", type=int, default=1000)
    ap.add_argument("--sigma", type=int, default=4)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    mat = panel_matrix(rng, args.h, args.w, args.sigma)
    print(f"panel: h={args.h} w={args.w} sigma={args.sigma}")

    results = {}
    small = mat[:64, :16].copy()
    for name, impls in (("numpy", kernels.NUMPY_IMPLS),
                        ("numba", kernels.NUMBA_IMPLS)):
        if impls is None:
            print(f"{name}: unavailable")
            continue
        impls["pbwt_matrix"](small, args.sigma)           # warm-up / jit compile
        impls["fore_column"](small[:, 0].copy(), args.sigma, 0)
        impls["run_starts"](small[:, 0].copy())
        results[name], runs = run_backend(impls, mat, args.sigma)
        print(f"{name}: " + "  ".join(f"{k}={v * 1e3:8.1f}ms"
                                      for k, v in results[name].items())
              + f"  (total runs {runs})")

    if len(results) == 2:
        for key in results["numpy"]:
            ratio = results["numpy"][key] / results["numba"][key]
            print(f"speedup {key}: {ratio:.2f}x")


if __name__ == "__main__":
    main()
