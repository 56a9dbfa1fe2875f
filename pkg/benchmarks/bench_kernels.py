#!/usr/bin/env python3
"""Time the compiled kernels against the numpy fallback.

The two hot paths are the log-domain binomial tail sums (every hazard or
survival evaluation runs one per array level) and the Monte Carlo trial
kernel.  Run from the repo root:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from mdsrel import _kernels_py

try:
    from mdsrel import _kernels
except ImportError:
    _kernels = None

from mdsrel.hazards import CompositeBathtub, ConstantHazard


def best_of(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_binomial_tails(mod):
    cum = np.geomspace(1e-3, 60.0, 200)
    log_r = -cum
    log_p = np.log(-np.expm1(-cum))
    return lambda: mod.log_binom_tails_grid(600, 3000, log_p, log_r)


def bench_mc_1d(mod):
    segs = ConstantHazard(1e-3).power_segments()
    return lambda: mod.sim_chunk_powerlaw(42, 0, 100_000, [20], [4], *segs)


def bench_mc_2d_bathtub(mod):
    segs = CompositeBathtub().power_segments()
    return lambda: mod.sim_chunk_powerlaw(42, 0, 20_000, [25, 12], [10, 2], *segs)


BENCHES = [
    ("binomial tails, n=3000, 200-point grid", bench_binomial_tails),
    ("MC 100k trials, (20,16), constant", bench_mc_1d),
    ("MC 20k trials, (25,15)x(12,10), bathtub", bench_mc_2d_bathtub),
]


def main():
    print(f"{'kernel':45s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, make in BENCHES:
        t_py = best_of(make(_kernels_py))
        if _kernels is None:
            print(f"{name:45s} {t_py * 1e3:9.2f}ms {'n/a':>10s} {'n/a':>8s}")
            continue
        t_c = best_of(make(_kernels))
        print(f"{name:45s} {t_py * 1e3:9.2f}ms {t_c * 1e3:9.2f}ms "
              f"{t_py / t_c:7.1f}x")
    if _kernels is None:
        print("\ncompiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
