#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallbacks.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import time

import numpy as np


def _load_impls():
    impls = []
    from dioapprox import _kernels_py
    impls.append(_kernels_py)
    try:
        from dioapprox import _speedups
        impls.append(_speedups)
    except ImportError:
        print("compiled kernels unavailable; benchmarking fallback only")
    return impls


def _time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_farey(impl, repeat):
    return _time(lambda: impl.farey_unit_count(2000), repeat)


def bench_rootsum(impl, repeat):
    def run():
        impl.roots_min_scan([1.0, 1.0, 1.0], [0.0, 0.0, 0.0], 499, (2,))
    return _time(run, repeat)


def bench_lll(impl, repeat):
    rng = np.random.default_rng(7)
    bases = rng.integers(-9, 10, size=(200, 6, 10)).astype(float)

    def run():
        for i in range(bases.shape[0]):
            B = bases[i].copy()
            U = np.eye(6, dtype=np.int64)
            impl.lll_reduce_f64(B, U)
    return _time(run, repeat)


def bench_aux_scan(impl, repeat):
    rng = np.random.default_rng(11)
    ncubes = 3000
    raw = rng.uniform(0.1, 1.0, size=(ncubes, 4, 6))
    weights = np.array([1e9, 1e6, 1e3, 1.0])

    def run():
        fs = np.zeros((ncubes, 6), dtype=np.int64)
        impl.aux_scan_batch(raw, weights, 0.1, fs, 1024)
    return _time(run, repeat)


BENCHES = [("farey_unit_count(2000)", bench_farey),
           ("roots_min_scan f(3,499)", bench_rootsum),
           ("lll_reduce_f64 x200", bench_lll),
           ("aux_scan_batch 3000 cubes", bench_aux_scan)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = _load_impls()
    width = max(len(name) for name, _ in BENCHES)
    header = f"{'benchmark':<{width}}  " + "  ".join(
        f"{impl.IMPL:>10}" for impl in impls)
    print(header)
    print("-" * len(header))
    for name, bench in BENCHES:
        times = [bench(impl, args.repeat) for impl in impls]
        cells = "  ".join(f"{t * 1e3:>8.2f}ms" for t in times)
        speedup = ""
        if len(times) == 2 and times[1] > 0:
            speedup = f"   ({times[0] / times[1]:.1f}x)"
        print(f"{name:<{width}}  {cells}{speedup}")


if __name__ == "__main__":
    main()
