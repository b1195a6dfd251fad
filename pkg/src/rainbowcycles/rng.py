"""Deterministic 64-bit pseudo-random generator used by every randomized routine.

All experiments in this package are reproducible from a single integer seed.
The generator is a splitmix-style stateless stream so that scalar Python code,
vectorized numpy code, and the compiled kernels all produce bit-identical
sequences.  The i-th output (i >= 1) for seed s is

    mix64(s + i * GAMMA)

with

    GAMMA = 0x9E3779B97F4A7C15
    mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
              z ^= z >> 27; z *= 0x94D049BB133111EB;
              z ^= z >> 31

all arithmetic modulo 2**64.  Floats take the top 53 bits; bounded integers
use rejection sampling so every stream consumer agrees exactly.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *salts: int) -> int:
    """Stable child seed for independent substreams (per round, per trial...)."""
    z = seed & MASK64
    for s in salts:
        z = mix64(z ^ mix64((s & MASK64) + GAMMA))
    return z


class SplitMix64:
    """Scalar stream: the canonical consumer-side generator."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GAMMA) & MASK64
        return mix64(self._state)

    def next_float(self) -> float:
        # 53-bit mantissa in [0, 1)
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) without modulo bias (rejection sampling)."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        threshold = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            u = self.next_u64()
            if u < threshold:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_distinct(self, k: int, n: int) -> list[int]:
        """k distinct values from range(n) by partial Fisher-Yates; order matters."""
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        pool = list(range(n))
        out = []
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
            out.append(pool[i])
        return out


def splitmix_array(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs start+1 .. start+count of the stream for `seed`, vectorized.

    splitmix_array(s, 0, k) equals [SplitMix64(s).next_u64() for _ in range(k)].
    """
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + idx * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))
