"""Pure-Python reference implementations of the hot kernels.

These are the semantics the compiled extension must match bit-for-bit; they
are selected automatically when the extension is unavailable and are used
directly by the cross-implementation agreement tests.
"""

from __future__ import annotations

import numpy as np

from .rng import SplitMix64, derive_seed


def seq_sweep(
    limit: int, c_num: int, c_den: int, m: int, bound_table: list[int]
) -> tuple[int, int, int, int, int]:
    """Walk every strictly increasing positive sequence with n_k <= limit.

    A sequence satisfies the gap condition iff for all pairs max(m,1) <= j <
    ell <= k (with n_0 = 0):

        c_den * n_j * (n_j - n_{j-1}) >=
            (n_ell - n_j) * ((c_den + c_num) * n_j - c_den * (2 n_ell - n_{ell-1}))

    Satisfaction is prefix-closed, so failing prefixes are pruned and their
    descendants counted arithmetically.  Returns (total sequences, satisfying,
    bound flags, sum of k over satisfying, max k), where a bound flag is a
    satisfying sequence whose length exceeds bound_table[n_k].
    """
    P = c_num + c_den
    j_lo = max(m, 1)
    seq: list[int] = []
    total = satisfied = flagged = sum_k = max_k = 0

    def extend_ok(v: int) -> bool:
        k = len(seq)
        if k == 0:
            return True
        two_e = 2 * v - seq[-1]
        for j in range(k, j_lo - 1, -1):
            nj = seq[j - 1]
            f2 = P * nj - c_den * two_e
            if f2 <= 0:
                break  # f2 grows with n_j, so smaller j cannot bind either
            njm1 = seq[j - 2] if j >= 2 else 0
            if c_den * nj * (nj - njm1) < (v - nj) * f2:
                return False
        return True

    def dfs(last: int):
        nonlocal total, satisfied, flagged, sum_k, max_k
        for v in range(last + 1, limit + 1):
            if extend_ok(v):
                seq.append(v)
                k = len(seq)
                total += 1
                satisfied += 1
                sum_k += k
                if k > max_k:
                    max_k = k
                if k > bound_table[v]:
                    flagged += 1
                dfs(v)
                seq.pop()
            else:
                # the failing sequence plus every right-extension of it
                total += 1 << (limit - v)

    dfs(0)
    return total, satisfied, flagged, sum_k, max_k


def sample_pair(seed: int, trial: int, n: int, a: int, b: int) -> tuple[list[int], list[int]]:
    """The (A, B) pair drawn by trial `trial`: a+b distinct vertices via
    partial Fisher-Yates on an independent substream."""
    rng = SplitMix64(derive_seed(seed, trial))
    sel = rng.sample_distinct(a + b, n)
    return sel[:a], sel[a:]


def pair_scan_counts(
    adj_words: np.ndarray, n: int, a: int, b: int, samples: int, seed: int
) -> np.ndarray:
    """e_H(A, B) for `samples` random disjoint pairs; adjacency as uint64 rows."""
    words = adj_words.shape[1]
    adj_ints = [
        int.from_bytes(adj_words[v].tobytes(), "little") for v in range(n)
    ]
    del words
    counts = np.empty(samples, dtype=np.uint32)
    for t in range(samples):
        A, B = sample_pair(seed, t, n, a, b)
        bmask = 0
        for v in B:
            bmask |= 1 << v
        counts[t] = sum((adj_ints[u] & bmask).bit_count() for u in A)
    return counts
