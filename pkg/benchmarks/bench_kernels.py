#!/usr/bin/env python3
"""Benchmark the compiled trace kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--n N] [--repeat K]
"""

import argparse
import time

import numpy as np

from hofq import _kernels_py

try:
    from hofq import _kernels
except ImportError:
    _kernels = None


def time_one_term(mod, n, repeat):
    f = np.arange(1, n + 1, dtype=np.int64) // 2
    best = float("inf")
    for _ in range(repeat):
        q = np.zeros(n, dtype=np.int64)
        t0 = time.perf_counter()
        status, _ = mod.one_term_trace(f, q)
        best = min(best, time.perf_counter() - t0)
        assert status == 0
    return best


def time_two_term(mod, n, repeat):
    best = float("inf")
    for _ in range(repeat):
        q = np.zeros(n, dtype=np.int64)
        q[:2] = (1, 1)
        t0 = time.perf_counter()
        status, _ = mod.two_term_trace(q, 2, 1, 1, 2, 0)
        best = min(best, time.perf_counter() - t0)
        assert status == 0
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5_000_000, help="trace length")
    ap.add_argument("--repeat", type=int, default=3, help="best-of runs")
    args = ap.parse_args()

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))

    print(f"trace length {args.n}, best of {args.repeat}\n")
    print(f"{'kernel':<22}{'backend':<10}{'seconds':>10}{'terms/s':>14}")
    results = {}
    for label, timer in (("one-term floor(n/2)", time_one_term),
                         ("two-term hofstadter", time_two_term)):
        for name, mod in backends:
            secs = timer(mod, args.n, args.repeat)
            results[(label, name)] = secs
            print(f"{label:<22}{name:<10}{secs:>10.4f}{args.n / secs:>14.3g}")
    if _kernels is not None:
        for label in ("one-term floor(n/2)", "two-term hofstadter"):
            ratio = results[(label, "python")] / results[(label, "cython")]
            print(f"\n{label}: compiled is {ratio:.1f}x faster")


if __name__ == "__main__":
    main()
