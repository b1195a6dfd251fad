"""Properly edge-colored graphs: representation, validation, queries, and file I/O.

Vertices are dense integers 0..n-1 and colors are non-negative integers, so
adjacency and color lookups are array-indexed.  A ColoredGraph is immutable
after construction; operations that change the edge set return new graphs.
Construction validates properness eagerly, so every downstream algorithm can
assume each color class is a matching.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DuplicateEdge,
    EmptySet,
    GraphFormatError,
    ImproperColoring,
    OverlappingSets,
)

Edge = tuple[int, int]

NO_EDGE = -1


def canon_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class ColoredGraph:
    """A simple graph with a proper edge coloring.

    The color matrix `cm` is symmetric with -1 on the diagonal and on
    non-edges; `cm[u, v]` is the color of edge {u, v}.
    """

    __slots__ = ("n", "_cm", "_degrees", "_adj_bits", "_classes", "_graph_id", "_m")

    def __init__(self, n: int, cm: np.ndarray, *, _validated: bool = False):
        self.n = n
        self._cm = cm
        self._degrees = (cm >= 0).sum(axis=1)
        self._adj_bits = None
        self._classes = None
        self._graph_id = None
        self._m = int(self._degrees.sum()) // 2
        if not _validated:
            _check_proper(n, cm)

    # -- basic queries -------------------------------------------------

    @property
    def num_edges(self) -> int:
        return self._m

    @property
    def graph_id(self) -> str:
        if self._graph_id is None:
            h = hashlib.sha256()
            h.update(str(self.n).encode())
            h.update(np.ascontiguousarray(self._cm).tobytes())
            self._graph_id = h.hexdigest()[:16]
        return self._graph_id

    def has_edge(self, u: int, v: int) -> bool:
        return self._cm[u, v] >= 0

    def color_of(self, u: int, v: int) -> int:
        c = int(self._cm[u, v])
        if c < 0:
            raise KeyError(f"no edge {{{u}, {v}}}")
        return c

    def degree(self, v: int) -> int:
        return int(self._degrees[v])

    def min_degree(self) -> int:
        return int(self._degrees.min()) if self.n else 0

    def degrees(self) -> np.ndarray:
        return self._degrees

    def neighbors(self, v: int) -> list[int]:
        return np.nonzero(self._cm[v] >= 0)[0].tolist()

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (u, v, color) with u < v in lexicographic order."""
        iu, iv = np.nonzero(np.triu(self._cm >= 0, k=1))
        cm = self._cm
        for u, v in zip(iu.tolist(), iv.tolist()):
            yield u, v, int(cm[u, v])

    def colors(self) -> list[int]:
        vals = np.unique(self._cm)
        return [int(c) for c in vals if c >= 0]

    def class_index(self) -> dict[int, list[Edge]]:
        """color -> list of edges carrying it (each class is a matching)."""
        if self._classes is None:
            classes: dict[int, list[Edge]] = {}
            for u, v, c in self.edges():
                classes.setdefault(c, []).append((u, v))
            self._classes = classes
        return self._classes

    def class_edges(self, color: int) -> list[Edge]:
        return list(self.class_index().get(color, []))

    def adjacency_bits(self) -> list[int]:
        """Neighborhoods as integer bitsets (bit v of adj[u] set iff uv is an edge)."""
        if self._adj_bits is None:
            packed = np.packbits(self._cm >= 0, axis=1, bitorder="little")
            self._adj_bits = [
                int.from_bytes(packed[u].tobytes(), "little") for u in range(self.n)
            ]
        return self._adj_bits

    def color_matrix(self) -> np.ndarray:
        """Read-only view of the color matrix (-1 marks non-edges)."""
        view = self._cm.view()
        view.flags.writeable = False
        return view

    def is_complete(self) -> bool:
        return self.n >= 1 and self.min_degree() == self.n - 1

    def __repr__(self) -> str:
        return f"ColoredGraph(n={self.n}, m={self._m}, colors={len(self.colors())})"


def _check_proper(n: int, cm: np.ndarray) -> None:
    if n == 0:
        return
    rows = np.sort(cm, axis=1)
    dup = (rows[:, 1:] == rows[:, :-1]) & (rows[:, 1:] >= 0)
    bad = np.nonzero(dup.any(axis=1))[0]
    if bad.size:
        v = int(bad[0])
        row = cm[v]
        seen: dict[int, int] = {}
        for u in np.nonzero(row >= 0)[0]:
            c = int(row[u])
            if c in seen:
                raise ImproperColoring(v, canon_edge(v, seen[c]), canon_edge(v, int(u)))
            seen[c] = int(u)
        raise AssertionError("duplicate color detected but not located")


def build_colored_graph(
    n: int, colored_edges: Iterable[tuple[int, int, int]]
) -> ColoredGraph:
    """Validate and build a ColoredGraph from (u, v, color) triples.

    Raises DuplicateEdge for a repeated pair and ImproperColoring (with the
    offending vertex and both edges) when two incident edges share a color.
    """
    if n < 0:
        raise ValueError("vertex count must be >= 0")
    cm = np.full((n, n), NO_EDGE, dtype=np.int32)
    for u, v, c in colored_edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"vertex out of range in edge ({u}, {v})")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if c < 0:
            raise ValueError(f"negative color {c} on edge ({u}, {v})")
        if cm[u, v] != NO_EDGE:
            raise DuplicateEdge(f"edge {canon_edge(u, v)} listed twice")
        cm[u, v] = c
        cm[v, u] = c
    return ColoredGraph(n, cm)


def as_vertex_set(vertices: Iterable[int], n: int) -> tuple[int, ...]:
    """Normalize to a sorted tuple of distinct vertex ids in range."""
    vs = sorted(int(v) for v in vertices)
    for i, v in enumerate(vs):
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} out of range 0..{n - 1}")
        if i and vs[i - 1] == v:
            raise ValueError(f"duplicate vertex {v}")
    return tuple(vs)


def edges_between(
    g: ColoredGraph, A: Iterable[int], B: Iterable[int]
) -> tuple[list[Edge], int]:
    """Edges with one endpoint in A and the other in B, plus their count.

    A and B must be disjoint.
    """
    sa = as_vertex_set(A, g.n)
    sb = as_vertex_set(B, g.n)
    if set(sa) & set(sb):
        raise OverlappingSets("A and B must be disjoint")
    out = []
    cm = g.color_matrix()
    for u in sa:
        row = cm[u]
        for v in sb:
            if row[v] >= 0:
                out.append(canon_edge(u, int(v)))
    out.sort()
    return out, len(out)


def count_edges_between(g: ColoredGraph, A: Sequence[int], B: Sequence[int]) -> int:
    """e_G(A, B) without materializing the edge list (A, B disjoint)."""
    if not A or not B:
        return 0
    sub = g.color_matrix()[np.ix_(list(A), list(B))]
    return int((sub >= 0).sum())


def neighborhood(g: ColoredGraph, U: Iterable[int]) -> tuple[int, ...]:
    """Union of the neighborhoods of the vertices in U (may intersect U)."""
    su = as_vertex_set(U, g.n)
    acc = 0
    bits = g.adjacency_bits()
    for u in su:
        acc |= bits[u]
    out = []
    while acc:
        low = acc & -acc
        out.append(low.bit_length() - 1)
        acc ^= low
    return tuple(out)


def subgraph_by_colors(g: ColoredGraph, colors: Iterable[int]) -> ColoredGraph:
    """Spanning subgraph keeping exactly the edges whose color is listed."""
    keep = set(int(c) for c in colors)
    cm = g.color_matrix()
    if keep:
        mask = np.isin(cm, np.fromiter(keep, dtype=np.int32, count=len(keep)))
    else:
        mask = np.zeros_like(cm, dtype=bool)
    out = np.where(mask, cm, NO_EDGE).astype(np.int32)
    return ColoredGraph(g.n, out, _validated=True)


def remove_color_classes(g: ColoredGraph, colors: Iterable[int]) -> ColoredGraph:
    """Spanning subgraph with every listed color class deleted (unknown ids are no-ops)."""
    drop = set(int(c) for c in colors)
    keep = [c for c in g.colors() if c not in drop]
    return subgraph_by_colors(g, keep)


# -- text format -----------------------------------------------------------
#
# One graph per file: first line "n m", then m lines "u v c" with 0-based
# integers and u < v, sorted by (u, v); '#' starts a comment line.


def write_graph(g: ColoredGraph, path: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{g.n} {g.num_edges}\n")
        for u, v, c in g.edges():
            fh.write(f"{u} {v} {c}\n")


def read_graph(path: str) -> ColoredGraph:
    """Parse the text format, rejecting any deviation from the contract."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh]
    rows = [ln for ln in lines if ln and not ln.startswith("#")]
    if not rows:
        raise GraphFormatError("missing header line")
    head = rows[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"header must be 'n m', got {rows[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"non-integer header {rows[0]!r}") from exc
    if len(rows) - 1 != m:
        raise GraphFormatError(f"expected {m} edge lines, found {len(rows) - 1}")
    triples = []
    prev: Edge | None = None
    for ln in rows[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise GraphFormatError(f"edge line must be 'u v c', got {ln!r}")
        try:
            u, v, c = (int(p) for p in parts)
        except ValueError as exc:
            raise GraphFormatError(f"non-integer edge line {ln!r}") from exc
        if not u < v:
            raise GraphFormatError(f"edge line {ln!r} violates u < v")
        if prev is not None and (u, v) <= prev:
            raise GraphFormatError(f"edge lines not sorted at {ln!r}")
        prev = (u, v)
        triples.append((u, v, c))
    return build_colored_graph(n, triples)


def require_nonempty(A: Sequence[int]) -> None:
    if len(A) == 0:
        raise EmptySet("vertex set must be nonempty")
