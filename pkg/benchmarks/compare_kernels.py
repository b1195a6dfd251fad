#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python fallbacks.

Run after an editable install:

    python benchmarks/compare_kernels.py

Outputs one table row per kernel/size with both timings and the speedup.
The two implementations are also checked for equal results on every case.
"""

import time
from fractions import Fraction

import numpy as np

from rainbowcycles import _kernels
from rainbowcycles.generators import round_robin_even
from rainbowcycles.oracle import bound_floor_table
from rainbowcycles.sampling import SampleParams, sample_color_subgraph


def timeit(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def adj_words(g):
    n = g.n
    words = (n + 63) // 64
    bits = g.adjacency_bits()
    out = np.zeros((n, words), dtype=np.uint64)
    for v in range(n):
        out[v] = np.frombuffer(bits[v].to_bytes(words * 8, "little"), dtype=np.uint64)
    return out


def main():
    if _kernels.compiled is None:
        print("compiled extension not available; rebuild with `pip install -e .`")
        return
    print(f"{'kernel':<28}{'size':<16}{'fallback':>12}{'compiled':>12}{'speedup':>10}")

    c = Fraction(1, 6)
    for limit in (16, 20, 24):
        tbl = bound_floor_table(limit, c, 1)
        a, ta = timeit(_kernels.fallback.seq_sweep, limit, 1, 6, 1, tbl)
        b, tb = timeit(_kernels.compiled.seq_sweep, limit, 1, 6, 1, tbl)
        assert a == b
        print(
            f"{'seq_sweep':<28}{f'n_k<={limit}':<16}{ta:>11.3f}s{tb:>11.3f}s{ta / tb:>9.1f}x"
        )

    for n, samples in ((128, 2000), (300, 5000)):
        g = round_robin_even(n)
        h = sample_color_subgraph(g, SampleParams(p=0.2, epsilon=0.15, seed=1))
        words = adj_words(h)
        a_cnt, ta = timeit(_kernels.fallback.pair_scan_counts, words, n, 8, 16, samples, 7)
        b_cnt, tb = timeit(_kernels.compiled.pair_scan_counts, words, n, 8, 16, samples, 7)
        assert np.array_equal(a_cnt, b_cnt)
        print(
            f"{'pair_scan_counts':<28}{f'n={n}, {samples} pairs':<16}"
            f"{ta:>11.3f}s{tb:>11.3f}s{ta / tb:>9.1f}x"
        )


if __name__ == "__main__":
    main()
