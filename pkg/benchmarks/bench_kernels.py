"""Timing comparison of the JIT-compiled kernels against the pure-Python
fallbacks (the path selected by FOCKTRACE_DISABLE_NUMBA=1).

Run:  python benchmarks/bench_kernels.py [--length 1048576]
"""

import argparse
import time

import numpy as np

from focktrace import _kernels


def bench(fn, *args, repeat=3, warmup=1):
    for _ in range(warmup):
        fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--length", type=int, default=1 << 20)
    args = parser.parse_args()
    L = args.length

    ones = np.ones(L)
    rng = np.random.default_rng(0)
    values = np.sort(rng.random(L))[::-1].copy()
    mults = np.ones(L, dtype=np.int64)
    ranks = np.array([2**e for e in range(10, int(np.log2(L)) + 1)],
                     dtype=np.int64) - 1

    cases = [
        ("ladder_row", lambda impl: impl["ladder_row"](ones, 0.59634736, 1.0)),
        ("pair_rows", lambda impl: impl["pair_rows"](0.5, 1.2, 0.82, 1.0, L - 1)),
        ("raise_row", lambda impl: impl["raise_row"](ones, 1.0)),
        ("partial_sums_at",
         lambda impl: impl["partial_sums_at"](values, mults, ranks)),
    ]

    backends = list(_kernels.IMPLS)
    print(f"kernel timings, length = {L} (best of 3)")
    header = f"{'kernel':<18}" + "".join(f"{b:>14}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, runner in cases:
        times = {}
        for b in backends:
            times[b] = bench(lambda impl=_kernels.IMPLS[b]: runner(impl))
        row = f"{name:<18}" + "".join(f"{times[b]*1e3:>12.2f}ms" for b in backends)
        if "numba" in times and "python" in times:
            row += f"{times['python'] / times['numba']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
