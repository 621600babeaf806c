"""Timing comparison of the numba and numpy kernel backends.

Runs every grid scan once per backend on the same inputs, reports the
best wall time over a few repeats, the speedup, and the largest
disagreement between the two result surfaces.

    python3 benchmarks/bench_kernels.py [--n 601] [--repeats 5]
"""

import argparse
import math
import time

import numpy as np

from coupon_bne import _kernels
from coupon_bne.scoring import f0, f1, make_quadratic

RT = math.sqrt(1.5)


def payment_tables(n=4001):
    rule = make_quadratic()
    xg = np.linspace(0.0, 1.0, n)
    clamped = np.clip(xg, 1e-12, 1.0 - 1e-12)
    f0v = np.array([f0(rule, x) for x in clamped])
    f1v = np.array([f1(rule, x) for x in clamped])
    return xg, f0v, f1v


def scans(n):
    pg = np.linspace(0.0, 1.0, n)
    qg = np.linspace(0.0, 1.0, n)
    xg, f0v, f1v = payment_tables()
    d0_opt = RT / (1.0 + RT)
    return {
        "privacy": lambda: _kernels.privacy_utility_surface(pg, qg, 50.0, 50.0, 1.0),
        "identity": lambda: _kernels.identity_equilibrium_scan(pg, qg, 0.6, 0.5, 0.5),
        "scoring": lambda: _kernels.scoring_equilibrium_scan(
            pg, qg, 0.6, 1.0, 1.0, xg, f0v, f1v
        ),
        "optout": lambda: _kernels.optout_equilibrium_scan(
            pg, qg, d0_opt, 1.0, 3.0, 2.0, 1.0, 1.0, 1.2
        ),
    }


def best_time(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=601, help="grid points per axis")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"numba available: {_kernels.NUMBA_AVAILABLE}")
    print(f"grid: {args.n} x {args.n}, best of {args.repeats}")
    print()
    print(f"{'kernel':<10} {'numba':>10} {'numpy':>10} {'speedup':>9} {'max diff':>10}")

    work = scans(args.n)
    for name, fn in work.items():
        _kernels.set_backend("numba" if _kernels.NUMBA_AVAILABLE else "numpy")
        fn()  # compile before timing
        t_numba = best_time(fn, args.repeats)
        out_numba = fn()

        _kernels.set_backend("numpy")
        t_numpy = best_time(fn, args.repeats)
        out_numpy = fn()
        _kernels.set_backend(None)

        finite = np.isfinite(out_numba) & np.isfinite(out_numpy)
        diff = float(np.max(np.abs(out_numba[finite] - out_numpy[finite]), initial=0.0))
        print(
            f"{name:<10} {t_numba:>9.4f}s {t_numpy:>9.4f}s "
            f"{t_numpy / t_numba:>8.1f}x {diff:>10.2e}"
        )


if __name__ == "__main__":
    main()
