# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the _fallback kernels.

Semantics (including the exact pseudo-random streams) must match _fallback
bit-for-bit; the agreement tests enforce this on small inputs.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint32_t, uint64_t
from libc.string cimport memset

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef uint64_t GAMMA = 0x9E3779B97F4A7C15UL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9UL
cdef uint64_t MIX2 = 0x94D049BB133111EBUL


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline uint64_t derive_seed2(uint64_t seed, uint64_t salt) nogil:
    return mix64(seed ^ mix64(salt + GAMMA))


def seq_sweep(int limit, int c_num, int c_den, int m, bound_table):
    """See _fallback.seq_sweep; identical contract.

    Iterative depth-first walk; `vfree[last]` is the smallest appended value
    for which every pair constraint is vacuous (second factor <= 0), so the
    exact integer check only runs for the few values below it.
    """
    if limit < 1 or limit > 62:
        raise ValueError("limit must be in 1..62")
    cdef int64_t P = c_num + c_den
    cdef int64_t den = c_den
    cdef int64_t j_lo = m if m > 1 else 1
    cdef int64_t lim = limit
    cdef int64_t table[80]
    cdef int64_t vfree[80]
    cdef int64_t seq[80]
    cdef int64_t next_try[80]
    memset(&seq, 0, sizeof(seq))
    cdef int64_t i
    for i in range(limit + 1):
        table[i] = bound_table[i]
        vfree[i] = ((P + den) * i + 2 * den - 1) // (2 * den)
    cdef int64_t total = 0, satisfied = 0, flagged = 0, sum_k = 0, max_k = 0
    cdef int64_t k = 0, v, last, j, nj, njm1, f2, two_e
    cdef bint ok
    next_try[0] = 1
    with nogil:
        while True:
            v = next_try[k]
            if v > lim:
                if k == 0:
                    break
                k -= 1
                continue
            next_try[k] = v + 1
            ok = True
            if k > 0:
                last = seq[k - 1]
                if v < vfree[last]:
                    two_e = 2 * v - last
                    j = k
                    while j >= j_lo:
                        nj = seq[j - 1]
                        f2 = P * nj - den * two_e
                        if f2 <= 0:
                            break
                        njm1 = seq[j - 2] if j >= 2 else 0
                        if den * nj * (nj - njm1) < (v - nj) * f2:
                            ok = False
                            break
                        j -= 1
            if ok:
                seq[k] = v
                k += 1
                total += 1
                satisfied += 1
                sum_k += k
                if k > max_k:
                    max_k = k
                if k > table[v]:
                    flagged += 1
                next_try[k] = v + 1
            else:
                total += (<int64_t>1) << (lim - v)
    return (int(total), int(satisfied), int(flagged), int(sum_k), int(max_k))


cdef inline uint64_t sm_next(uint64_t* state) nogil:
    state[0] += GAMMA
    return mix64(state[0])


cdef inline uint64_t randbelow(uint64_t* state, uint64_t n) nogil:
    # rejection sampling; matches rng.SplitMix64.randbelow exactly
    cdef uint64_t rem = (0 - n) % n  # 2**64 mod n
    cdef uint64_t threshold = 0 - rem  # 2**64 - rem, wraps to 0 when rem == 0
    cdef uint64_t u
    while True:
        u = sm_next(state)
        if rem == 0 or u < threshold:
            return u % n


def pair_scan_counts(
    cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] adj_words,
    int n,
    int a,
    int b,
    int samples,
    unsigned long long seed,
):
    """See _fallback.pair_scan_counts; identical contract and streams."""
    cdef int words = adj_words.shape[1]
    cdef cnp.ndarray[cnp.uint32_t, ndim=1] counts = np.empty(samples, dtype=np.uint32)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] bmask = np.zeros(words, dtype=np.uint64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] pool = np.empty(n, dtype=np.int32)
    cdef uint64_t* adj = <uint64_t*> adj_words.data
    cdef uint64_t* bm = <uint64_t*> bmask.data
    cdef cnp.int32_t* pl = <cnp.int32_t*> pool.data
    cdef uint64_t state
    cdef int t, i, w, u
    cdef uint64_t j
    cdef cnp.int32_t tmp
    cdef uint64_t cnt
    with nogil:
        for t in range(samples):
            state = derive_seed2(seed, <uint64_t>t)
            for i in range(n):
                pl[i] = i
            # partial Fisher-Yates: first a entries form A, next b form B
            for i in range(a + b):
                j = <uint64_t>i + randbelow(&state, <uint64_t>(n - i))
                tmp = pl[i]
                pl[i] = pl[j]
                pl[j] = tmp
            for w in range(words):
                bm[w] = 0
            for i in range(a, a + b):
                bm[pl[i] >> 6] |= (<uint64_t>1) << (pl[i] & 63)
            cnt = 0
            for i in range(a):
                u = pl[i]
                for w in range(words):
                    cnt += __builtin_popcountll(adj[u * words + w] & bm[w])
            counts[t] = <uint32_t>cnt
    return counts
