"""Rainbow path forests: greedy construction, swaps, closure-search minimization,
and Hamilton-cycle assembly.

A path forest is a set of vertex-disjoint paths (singletons allowed); it is
rainbow when all its edge colors are pairwise distinct.  A swap adds an edge
joining endpoints of two distinct paths and, when that edge's color is already
present in the forest, removes the unique same-colored forest edge.  Forests
reachable by swap sequences never gain paths, which is what the minimization
search exploits.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import IllegalSwap, NotComplete, NotSpanning, NTooSmall
from .graph import ColoredGraph, canon_edge

Path = tuple[int, ...]
Paths = tuple[Path, ...]
Edge = tuple[int, int]


def canonical_paths(paths: Iterable[Sequence[int]]) -> Paths:
    """Orient each path lexicographically-least-end-first and sort the list."""
    out = []
    for p in paths:
        t = tuple(p)
        r = tuple(reversed(t))
        out.append(t if t <= r else r)
    return tuple(sorted(out))


def path_edges(p: Sequence[int]) -> list[Edge]:
    return [canon_edge(p[k], p[k + 1]) for k in range(len(p) - 1)]


class PathForest:
    """Immutable snapshot of a rainbow path forest inside a host graph."""

    __slots__ = ("host", "paths", "covered", "used_colors", "_edge_count")

    def __init__(self, g: ColoredGraph, paths: Iterable[Sequence[int]]):
        ps = canonical_paths(paths)
        seen: set[int] = set()
        colors: dict[int, Edge] = {}
        nedges = 0
        for p in ps:
            if len(p) == 0:
                raise ValueError("empty path")
            for v in p:
                if not 0 <= v < g.n:
                    raise ValueError(f"vertex {v} out of range")
                if v in seen:
                    raise ValueError(f"vertex {v} on two paths")
                seen.add(v)
            for e in path_edges(p):
                if not g.has_edge(*e):
                    raise ValueError(f"path uses non-edge {e}")
                c = g.color_of(*e)
                if c in colors:
                    raise ValueError(f"color {c} repeated on {colors[c]} and {e}")
                colors[c] = e
                nedges += 1
        self.host = g.graph_id
        self.paths = ps
        self.covered = frozenset(seen)
        self.used_colors = frozenset(colors)
        self._edge_count = nedges

    @property
    def path_count(self) -> int:
        return len(self.paths)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def endpoints(self) -> frozenset[int]:
        """A(F): vertices that are an end of some path (a singleton is its own end)."""
        return frozenset(v for p in self.paths for v in (p[0], p[-1]))

    def is_spanning(self, g: ColoredGraph) -> bool:
        return len(self.covered) == g.n

    def color_to_edge(self, g: ColoredGraph) -> dict[int, Edge]:
        return {g.color_of(*e): e for p in self.paths for e in path_edges(p)}

    def __repr__(self) -> str:
        return f"PathForest(paths={self.path_count}, edges={self._edge_count})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PathForest) and self.paths == other.paths

    def __hash__(self) -> int:
        return hash(self.paths)


def spanning_completion(F: PathForest, g: ColoredGraph) -> PathForest:
    """Add a singleton path for every uncovered vertex."""
    extra = [(v,) for v in range(g.n) if v not in F.covered]
    return PathForest(g, list(F.paths) + extra) if extra else F


@dataclass(frozen=True)
class Swap:
    """One elementary forest rewrite: add `added`, optionally remove `removed`.

    The associated color is the color of `added` (and of `removed` when present).
    """

    added: Edge
    removed: Edge | None
    color: int


@dataclass
class GreedyForestReport:
    gamma: float
    delta: float
    hypothesis_ok: bool
    min_degree_ok: bool
    path_count: int
    edge_count: int
    paths_target: float
    edges_target: float
    paths_target_met: bool
    edges_target_met: bool
    uncovered: tuple[int, ...] = ()


@dataclass
class GreedyForestResult:
    forest: PathForest
    report: GreedyForestReport


def greedy_rainbow_forest(
    g: ColoredGraph, gamma: float, delta: float
) -> GreedyForestResult:
    """Merge-greedy rainbow path forest: starting from singletons, repeatedly
    apply the lexicographically smallest add-only swap.

    Returns the forest (singletons dropped; they are reported as uncovered)
    together with a report on the (<= gamma*n paths, >= (1-4*delta)*n edges)
    targets.  A failed arithmetic precondition is a warning, not an error.
    """
    n = g.n
    hyp_ok = delta >= gamma and (3 * gamma * delta - gamma * gamma / 2) > (
        1.0 / n if n else 0.0
    )
    mindeg_ok = g.min_degree() >= (1 - delta) * n
    if not hyp_ok:
        warnings.warn(
            "greedy forest parameter hypothesis fails "
            f"(gamma={gamma}, delta={delta}, n={n}); search still runs",
            stacklevel=2,
        )

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deg = [0] * n
    used_colors: set[int] = set()
    fadj: list[list[int]] = [[] for _ in range(n)]
    nedges = 0
    for u, v, c in g.edges():
        if deg[u] >= 2 or deg[v] >= 2 or c in used_colors:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        parent[ru] = rv
        used_colors.add(c)
        deg[u] += 1
        deg[v] += 1
        fadj[u].append(v)
        fadj[v].append(u)
        nedges += 1

    paths = []
    visited = [False] * n
    for v in range(n):
        if deg[v] == 1 and not visited[v]:
            seq = [v]
            visited[v] = True
            prev, cur = v, fadj[v][0]
            while True:
                seq.append(cur)
                visited[cur] = True
                nxts = [w for w in fadj[cur] if w != prev]
                if not nxts:
                    break
                prev, cur = cur, nxts[0]
            paths.append(tuple(seq))
    uncovered = tuple(v for v in range(n) if deg[v] == 0)

    forest = PathForest(g, paths)
    pt, et = gamma * n, (1 - 4 * delta) * n
    report = GreedyForestReport(
        gamma=gamma,
        delta=delta,
        hypothesis_ok=hyp_ok,
        min_degree_ok=mindeg_ok,
        path_count=forest.path_count,
        edge_count=forest.edge_count,
        paths_target=pt,
        edges_target=et,
        paths_target_met=forest.path_count <= pt,
        edges_target_met=forest.edge_count >= et,
        uncovered=uncovered,
    )
    return GreedyForestResult(forest, report)


def legal_swaps(F: PathForest, g: ColoredGraph) -> list[Swap]:
    """Every swap applicable to F: color-unused additions and same-color exchanges."""
    ends: list[tuple[int, int]] = []  # (vertex, path index)
    for i, p in enumerate(F.paths):
        ends.append((p[0], i))
        if len(p) > 1:
            ends.append((p[-1], i))
    color_edge = F.color_to_edge(g)
    out = []
    for a in range(len(ends)):
        u, pi = ends[a]
        for b in range(a + 1, len(ends)):
            v, pj = ends[b]
            if pi == pj or not g.has_edge(u, v):
                continue
            c = g.color_of(u, v)
            removed = color_edge.get(c)
            out.append(Swap(canon_edge(u, v), removed, c))
    out.sort(key=lambda s: (s.added, s.removed or (-1, -1)))
    return out


def _apply_to_paths(paths: Paths, swap: Swap) -> Paths:
    """Apply a structurally legal swap to a path list (no color re-checks)."""
    u, v = swap.added
    ia = ib = -1
    for i, p in enumerate(paths):
        if p[0] == u or p[-1] == u:
            ia = i
        if p[0] == v or p[-1] == v:
            ib = i
    if ia < 0 or ib < 0 or ia == ib:
        raise IllegalSwap(f"edge {swap.added} does not join endpoints of two paths")
    pa, pb = paths[ia], paths[ib]
    if pa[-1] != u:
        pa = tuple(reversed(pa))
    if pb[0] != v:
        pb = tuple(reversed(pb))
    merged = pa + pb
    rest = [p for i, p in enumerate(paths) if i not in (ia, ib)]
    if swap.removed is None:
        return canonical_paths(rest + [merged])
    x, y = swap.removed
    new_paths = []
    split_done = False
    for p in rest + [merged]:
        if not split_done:
            for k in range(len(p) - 1):
                if canon_edge(p[k], p[k + 1]) == (x, y):
                    new_paths.append(p[: k + 1])
                    new_paths.append(p[k + 1 :])
                    split_done = True
                    break
            else:
                new_paths.append(p)
                continue
        else:
            new_paths.append(p)
    if not split_done:
        raise IllegalSwap(f"removed edge {swap.removed} not in forest")
    return canonical_paths(new_paths)


def apply_swap(F: PathForest, g: ColoredGraph, swap: Swap) -> tuple[PathForest, int]:
    """Apply a swap, returning the new forest and the path-count delta.

    A removed end-edge leaves its orphaned vertex in the forest as a singleton
    path, so coverage never shrinks.
    """
    u, v = swap.added
    if not g.has_edge(u, v) or g.color_of(u, v) != swap.color:
        raise IllegalSwap(f"added edge {swap.added} missing or color mismatch")
    color_edge = F.color_to_edge(g)
    present = color_edge.get(swap.color)
    if swap.removed is None:
        if present is not None:
            raise IllegalSwap(
                f"color {swap.color} already used on {present}; removal required"
            )
    else:
        if present != canon_edge(*swap.removed):
            raise IllegalSwap(
                f"removed edge {swap.removed} does not carry color {swap.color}"
            )
    new_paths = _apply_to_paths(F.paths, swap)
    new = PathForest(g, new_paths)
    return new, new.path_count - F.path_count


@dataclass(frozen=True)
class SearchBudget:
    """Limits for the breadth-first closure search."""

    max_width: int = 10_000
    max_depth: int = 8
    max_rounds: int = 64
    unlimited: bool = False


@dataclass
class MinimizeResult:
    forest: PathForest
    swap_sequence: list[Swap]
    swap_optimal: bool  # certified only when the closure was exhausted
    rounds: int
    states_visited: int

    @property
    def budget_swap_optimal(self) -> bool:
        return not self.swap_optimal


def _bfs_improve(start: Paths, g: ColoredGraph, budget: SearchBudget):
    """One search round: BFS over canonical forests reachable from `start`,
    stopping at the first forest with fewer paths.

    Returns (improved_paths | None, swap chain, states visited, exhausted).
    """
    p0 = len(start)
    visited = {start}
    parents: dict[Paths, tuple[Paths, Swap] | None] = {start: None}
    frontier = [start]
    exhausted = True
    depth = 0
    while frontier:
        if not budget.unlimited and depth >= budget.max_depth:
            exhausted = False
            break
        depth += 1
        nxt = []
        for state in frontier:
            forest = PathForest(g, state)
            for swap in legal_swaps(forest, g):
                child = _apply_to_paths(state, swap)
                if child in visited:
                    continue
                visited.add(child)
                parents[child] = (state, swap)
                if len(child) < p0:
                    chain = [swap]
                    cur = state
                    while parents[cur] is not None:
                        prev, sw = parents[cur]
                        chain.append(sw)
                        cur = prev
                    chain.reverse()
                    return child, chain, len(visited), exhausted
                nxt.append(child)
        nxt.sort()
        if not budget.unlimited and len(nxt) > budget.max_width:
            nxt = nxt[: budget.max_width]
            exhausted = False
        frontier = nxt
    return None, [], len(visited), exhausted


def swap_minimize(
    F: PathForest, g: ColoredGraph, budget: SearchBudget | None = None
) -> MinimizeResult:
    """Search the swap closure for forests with fewer paths, committing greedily
    on the first improvement and repeating until certified swap-optimal or the
    budget runs out.

    With an unlimited budget on small instances the result is exactly
    swap-optimal; otherwise the flag reports only budget-level optimality.
    """
    budget = budget or SearchBudget()
    cur = F.paths
    trace: list[Swap] = []
    total = 0
    rounds = 0
    certified = False
    while True:
        if len(cur) == 1:
            certified = True  # a single path cannot lose a path by swaps
            break
        if not budget.unlimited and rounds >= budget.max_rounds:
            break
        rounds += 1
        improved, chain, visited, exhausted = _bfs_improve(cur, g, budget)
        total += visited
        if improved is None:
            certified = exhausted
            break
        trace.extend(chain)
        cur = improved
    return MinimizeResult(
        forest=PathForest(g, cur),
        swap_sequence=trace,
        swap_optimal=certified,
        rounds=rounds,
        states_visited=total,
    )


@dataclass
class HamiltonResult:
    cycle: tuple[int, ...]
    distinct_colors: int
    connectors: list[Edge] = field(default_factory=list)


def hamilton_from_forest(F: PathForest, g: ColoredGraph) -> HamiltonResult:
    """Close a spanning forest of a complete host into a Hamilton cycle.

    The forest's edges are all kept; connector edges between consecutive paths
    are chosen greedily to introduce unused colors, so the cycle carries at
    least n - p(F) distinct colors.
    """
    if g.n < 3:
        raise NTooSmall("need n >= 3 for a Hamilton cycle")
    if not F.is_spanning(g):
        raise NotSpanning(f"forest covers {len(F.covered)} of {g.n} vertices")
    if not g.is_complete():
        raise NotComplete("host graph is not complete")

    remaining = list(F.paths[1:])
    seq = list(F.paths[0])
    used = set(F.used_colors)
    connectors: list[Edge] = []
    while remaining:
        end = seq[-1]
        chosen = None
        for idx, p in enumerate(remaining):
            for head_first in (True, False):
                head = p[0] if head_first else p[-1]
                c = g.color_of(end, head)
                if c not in used:
                    chosen = (idx, head_first, c)
                    break
            if chosen:
                break
        if chosen is None:
            idx, head_first = 0, True
            chosen = (idx, head_first, g.color_of(end, remaining[0][0]))
        idx, head_first, c = chosen
        p = remaining.pop(idx)
        if not head_first:
            p = tuple(reversed(p))
        connectors.append(canon_edge(end, p[0]))
        used.add(c)
        seq.extend(p)
    connectors.append(canon_edge(seq[-1], seq[0]))

    cycle = tuple(seq)
    colors = {g.color_of(cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle))}
    return HamiltonResult(cycle=cycle, distinct_colors=len(colors), connectors=connectors)
