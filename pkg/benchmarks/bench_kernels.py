#!/usr/bin/env python3
"""Time the lattice-sum hot kernels: numba backend vs pure-numpy fallback.

The same arrays are pushed through both implementations; the report shows
per-call timings and the maximum relative deviation between the two paths.

    python benchmarks/bench_kernels.py [--terms 1000] [--values 4096] [--repeat 5]

Selecting the backend for the package itself is an environment decision:
LAMELLAR_FORCE_NUMPY=1 forces the numpy path everywhere.
"""

import argparse
import time

import numpy as np


def timeit(fn, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--terms", type=int, default=1000)
    ap.add_argument("--values", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    from lamellar import _lattice_numpy as ln

    try:
        from lamellar import _lattice_numba as lb
    except ImportError:
        lb = None
        print("numba not importable: timing the numpy path only")

    rng = np.random.default_rng(0)
    t_point = rng.uniform(0.0, 0.5, args.values)
    t_sym = rng.uniform(-0.99, 0.99, args.values)
    s = 0.25

    cases = [
        ("point_sum", t_point),
        ("phi_sum", t_sym),
        ("f_sum", t_sym),
    ]
    header = f"{'kernel':<10} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9} {'max rel dev':>13}"
    print(header)
    print("-" * len(header))
    for name, data in cases:
        tn, outn = timeit(getattr(ln, name), data, s, args.terms, repeat=args.repeat)
        if lb is None:
            print(f"{name:<10} {tn * 1e3:>12.2f} {'-':>12} {'-':>9} {'-':>13}")
            continue
        fb = getattr(lb, name)
        fb(data[:4], s, args.terms)  # compile outside the timed region
        tb, outb = timeit(fb, data, s, args.terms, repeat=args.repeat)
        scale = np.maximum(np.abs(outn), 1e-30)
        dev = float(np.max(np.abs(outn - outb) / scale))
        print(f"{name:<10} {tn * 1e3:>12.2f} {tb * 1e3:>12.2f} {tn / tb:>8.1f}x {dev:>13.2e}")


if __name__ == "__main__":
    main()
