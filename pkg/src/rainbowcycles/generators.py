"""Generators for properly edge-colored complete graphs.

Four families: the circle-method 1-factorization of K_n (even n, n-1 colors),
the modular coloring of K_n (odd n, n colors), colorings read off symmetric
Latin squares, and seeded random proper colorings via greedy first-fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EvenN, NotLatin, NotSymmetric, OddN, PaletteTooSmall, RainbowError
from .graph import ColoredGraph, build_colored_graph
from .rng import SplitMix64, derive_seed

KINDS = ("round_robin_even", "circular_odd", "latin_symmetric", "random_proper")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    extra_colors: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "round_robin_even" and (self.n < 2 or self.n % 2):
            raise OddN(f"round_robin_even requires even n >= 2, got {self.n}")
        if self.kind == "circular_odd" and (self.n < 3 or self.n % 2 == 0):
            raise EvenN(f"circular_odd requires odd n >= 3, got {self.n}")
        if self.kind == "random_proper" and self.n < 2:
            raise ValueError("random_proper requires n >= 2")
        if self.extra_colors < 0:
            raise ValueError("extra_colors must be >= 0")


def round_robin_even(n: int) -> ColoredGraph:
    """Circle-method 1-factorization of K_n: n-1 perfect-matching color classes.

    Round r pairs vertex n-1 with r and pairs i with j whenever
    i + j = 2r (mod n-1).
    """
    if n < 2 or n % 2:
        raise OddN(f"need even n >= 2, got {n}")
    mod = n - 1
    edges = []
    for r in range(mod):
        edges.append((*sorted((r, n - 1)), r))
        for i in range(mod):
            j = (2 * r - i) % mod
            if i < j:
                edges.append((i, j, r))
    return build_colored_graph(n, edges)


def circular_odd(n: int) -> ColoredGraph:
    """K_n (odd n) with edge {i, j} colored i + j (mod n); n near-perfect classes."""
    if n < 3 or n % 2 == 0:
        raise EvenN(f"need odd n >= 3, got {n}")
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((i, j, (i + j) % n))
    return build_colored_graph(n, edges)


def latin_symmetric(square: Sequence[Sequence]) -> ColoredGraph:
    """Color K_n from a symmetric Latin square: edge {i, j} gets symbol L[i][j].

    The square must be Latin, symmetric, and have a constant diagonal (even n)
    or all-distinct diagonal (odd n); symbols may be arbitrary hashables and
    are mapped to dense integer colors in sorted order of their repr.
    """
    n = len(square)
    if n < 2:
        raise NotLatin("square must have order >= 2")
    rows = [list(r) for r in square]
    for r in rows:
        if len(r) != n:
            raise NotLatin("square is not n x n")
    symbols = set(rows[0])
    if len(symbols) != n:
        raise NotLatin("first row is not a permutation of n symbols")
    for i in range(n):
        if set(rows[i]) != symbols or len(set(rows[i])) != n:
            raise NotLatin(f"row {i} is not a permutation of the symbol set")
        col = {rows[j][i] for j in range(n)}
        if col != symbols:
            raise NotLatin(f"column {i} is not a permutation of the symbol set")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(f"L[{i}][{j}] != L[{j}][{i}]")
    diag = [rows[i][i] for i in range(n)]
    if n % 2 == 0:
        if len(set(diag)) != 1:
            raise RainbowError(
                "even-order square needs a constant diagonal for a proper coloring"
            )
    else:
        if len(set(diag)) != n:
            raise RainbowError(
                "odd-order square needs an all-distinct diagonal for a proper coloring"
            )
    used = sorted({rows[i][j] for i in range(n) for j in range(i + 1, n)}, key=repr)
    color_id = {s: k for k, s in enumerate(used)}
    edges = [
        (i, j, color_id[rows[i][j]]) for i in range(n) for j in range(i + 1, n)
    ]
    return build_colored_graph(n, edges)


def random_proper(n: int, extra_colors: int = 1, seed: int = 0) -> ColoredGraph:
    """Random proper coloring of K_n: seeded random edge order, greedy first-fit.

    Palette size is n-1+extra_colors (even n) or n+extra_colors (odd n); on a
    dead end the whole attempt restarts with a fresh edge order, up to 100
    restarts.  Deterministic for a fixed seed.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    palette = (n - 1 if n % 2 == 0 else n) + extra_colors
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for attempt in range(100):
        rng = SplitMix64(derive_seed(seed, attempt))
        order = list(pairs)
        rng.shuffle(order)
        at_vertex = [set() for _ in range(n)]
        edges = []
        ok = True
        for u, v in order:
            taken = at_vertex[u] | at_vertex[v]
            c = next((c for c in range(palette) if c not in taken), None)
            if c is None:
                ok = False
                break
            at_vertex[u].add(c)
            at_vertex[v].add(c)
            edges.append((u, v, c))
        if ok:
            return build_colored_graph(n, edges)
    raise PaletteTooSmall(
        f"greedy failed for n={n} with palette {palette} after 100 restarts"
    )


def rainbow_complete(n: int) -> ColoredGraph:
    """K_n with every edge its own color (the all-distinct extreme case)."""
    edges = []
    c = 0
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((i, j, c))
            c += 1
    return build_colored_graph(n, edges)


def generate(spec: GeneratorSpec) -> ColoredGraph:
    if spec.kind == "round_robin_even":
        return round_robin_even(spec.n)
    if spec.kind == "circular_odd":
        return circular_odd(spec.n)
    if spec.kind == "random_proper":
        return random_proper(spec.n, spec.extra_colors, spec.seed)
    raise ValueError("latin_symmetric requires an explicit square; use latin_symmetric()")
