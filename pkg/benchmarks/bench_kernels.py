"""Benchmark the windowed-max kernel: numba backend vs pure numpy.

Runs both implementations on identical synthetic workloads and prints a
timing table. The numba path is warmed up first so JIT compilation does
not pollute the numbers.

Usage:
    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --advs 200000 --queries 100000
"""

import argparse
import time

import numpy as np

from beaconsense import _kernels_numba, _kernels_numpy


def make_workload(rng, n_advs, n_queries, horizon_ms):
    adv_t = np.sort(rng.integers(0, horizon_ms, size=n_advs))
    adv_rss = rng.integers(-100, -20, size=n_advs)
    query_t = np.sort(rng.integers(0, horizon_ms, size=n_queries))
    return adv_t, adv_rss, query_t


def time_impl(impl, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        impl(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--advs", type=int, default=100_000)
    parser.add_argument("--queries", type=int, default=50_000)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    opts = parser.parse_args()

    rng = np.random.default_rng(opts.seed)
    horizon = max(opts.advs, opts.queries) * 20
    workload = make_workload(rng, opts.advs, opts.queries, horizon)

    # warm up the JIT before timing anything
    small = make_workload(rng, 100, 100, 10_000)
    _kernels_numba.windowed_max_many(*small, 300)

    print(f"advs={opts.advs} queries={opts.queries} repeats={opts.repeats}")
    print(f"{'window_ms':>9} {'numpy_ms':>10} {'numba_ms':>10} {'speedup':>8}")
    for window in (0, 300, 1000, 10_000):
        args = (*workload, window)
        expected = _kernels_numpy.windowed_max_many(*args)
        got = _kernels_numba.windowed_max_many(*args)
        if not np.array_equal(expected, got):
            raise SystemExit(f"backends disagree at window {window}")
        t_numpy = time_impl(_kernels_numpy.windowed_max_many, args, opts.repeats)
        t_numba = time_impl(_kernels_numba.windowed_max_many, args, opts.repeats)
        print(
            f"{window:>9} {t_numpy * 1e3:>10.2f} {t_numba * 1e3:>10.2f} "
            f"{t_numpy / t_numba:>7.1f}x"
        )


if __name__ == "__main__":
    main()
