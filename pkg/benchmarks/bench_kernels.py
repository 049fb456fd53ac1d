"""Benchmark the jit kernels against the pure-numpy fallback.

Run `python benchmarks/bench_kernels.py` to time the active backend, or
`python benchmarks/bench_kernels.py --both` to spawn one subprocess per
backend and print a comparison table.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_current():
    from apexp.kernels import BACKEND, almost_period_sup, kron_scan_grid

    rng = np.random.default_rng(7)
    vals = np.array([1.4142135623730951, 1.7320508075688772])
    targs = np.array([0.123, 0.456])
    # warm-up compiles the jit path so timings measure steady state
    kron_scan_grid(vals, targs, 0.05, 0.0, 10.0, 0.001)

    results = {}
    results["kron_scan_grid (eps 2e-3, ~6M steps)"] = _time(
        lambda: kron_scan_grid(vals, targs, 0.002, 0.0, 3000.0, 0.0005))

    pts = rng.random((4000, 2))
    almost_period_sup(pts[:100], 10, 1)
    results["almost_period_sup (4000 pts, 2000 shifts)"] = _time(
        lambda: almost_period_sup(pts, 2000, 1))

    print(f"backend: {BACKEND}")
    for name, secs in results.items():
        print(f"  {name}: {secs * 1000:.1f} ms")
    return results


def run_both():
    here = os.path.dirname(os.path.abspath(__file__))
    for label, env_flag in [("numba", ""), ("numpy", "1")]:
        env = dict(os.environ, APEXP_NO_NUMBA=env_flag)
        subprocess.run([sys.executable, os.path.join(here, "bench_kernels.py")],
                       env=env, check=True)


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--both", action="store_true",
                        help="compare numba and numpy backends")
    args = parser.parse_args()
    if args.both:
        run_both()
    else:
        run_current()
