"""Exact brute-force references and independent validators for small instances.

Everything here is written against the raw graph interface only, so the
validators and oracles stay independent of the search code they certify:
longest rainbow cycles/paths by pruned backtracking, minimum spanning rainbow
path forests, exhaustive swap closures, and the exact-rational sequence-bound
checks used by the spanning-forest path-count argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConditionNotVerified, InstanceTooLarge
from .graph import ColoredGraph, canon_edge, count_edges_between, subgraph_by_colors

Path = tuple[int, ...]
Paths = tuple[Path, ...]


# -- independent validators --------------------------------------------------


def verify_rainbow_cycle(g: ColoredGraph, cycle: Sequence[int]) -> tuple[bool, str | None]:
    """Check a vertex sequence is a rainbow cycle of g; returns (ok, first violation)."""
    cs = list(cycle)
    if len(cs) < 3:
        return False, f"cycle needs >= 3 vertices, got {len(cs)}"
    seen = set()
    for v in cs:
        if not 0 <= v < g.n:
            return False, f"vertex {v} out of range"
        if v in seen:
            return False, f"vertex {v} repeated"
        seen.add(v)
    colors = set()
    for k in range(len(cs)):
        u, v = cs[k], cs[(k + 1) % len(cs)]
        if not g.has_edge(u, v):
            return False, f"missing edge ({u}, {v})"
        c = g.color_of(u, v)
        if c in colors:
            return False, f"color {c} repeated on edge ({u}, {v})"
        colors.add(c)
    return True, None


def verify_cycle_structure(g: ColoredGraph, cycle: Sequence[int]) -> tuple[bool, str | None]:
    """Cycle check without the rainbow requirement (for Hamilton cycles that
    intentionally repeat colors): distinct vertices, consecutive adjacency, wrap."""
    cs = list(cycle)
    if len(cs) < 3:
        return False, f"cycle needs >= 3 vertices, got {len(cs)}"
    if len(set(cs)) != len(cs):
        return False, "repeated vertex"
    for k in range(len(cs)):
        u, v = cs[k], cs[(k + 1) % len(cs)]
        if not 0 <= u < g.n or not g.has_edge(u, v):
            return False, f"missing edge ({u}, {v})"
    return True, None


def verify_forest(g: ColoredGraph, paths: Iterable[Sequence[int]]) -> tuple[bool, str | None]:
    """Check vertex-disjoint adjacency-respecting rainbow paths; (ok, violation)."""
    seen = set()
    colors = set()
    for p in paths:
        ps = list(p)
        if not ps:
            return False, "empty path"
        for v in ps:
            if not 0 <= v < g.n:
                return False, f"vertex {v} out of range"
            if v in seen:
                return False, f"vertex {v} on two paths"
            seen.add(v)
        for k in range(len(ps) - 1):
            u, v = ps[k], ps[k + 1]
            if not g.has_edge(u, v):
                return False, f"missing edge ({u}, {v})"
            c = g.color_of(u, v)
            if c in colors:
                return False, f"color {c} repeated on edge ({u}, {v})"
            colors.add(c)
    return True, None


# -- brute-force searches ----------------------------------------------------


def _neighbors_by_color(g: ColoredGraph) -> list[list[tuple[int, int]]]:
    out = []
    cm = g.color_matrix()
    for v in range(g.n):
        row = [(int(cm[v, u]), u) for u in range(g.n) if cm[v, u] >= 0]
        row.sort()
        out.append([(u, c) for c, u in row])
    return out


def brute_longest_rainbow_cycle(
    g: ColoredGraph, cap: int = 11
) -> tuple[int, Path | None]:
    """Exact maximum rainbow cycle length by backtracking with color-set pruning.

    Returns (0, None) when no rainbow cycle exists.  Each cycle is enumerated
    once: anchored at its smallest vertex, direction fixed by second < last.
    """
    n = g.n
    if n > cap:
        raise InstanceTooLarge(f"n={n} exceeds cap {cap}")
    nbrs = _neighbors_by_color(g)
    best_len = 0
    best: Path | None = None
    path: list[int] = []
    state = {"on": 0}

    def dfs(s: int, colors: set[int], allowed_left: int):
        nonlocal best_len, best
        if best_len == n or len(path) + allowed_left <= best_len:
            return
        cur = path[-1]
        for w, c in nbrs[cur]:
            if c in colors:
                continue
            if w == s and len(path) >= 3 and path[1] < path[-1]:
                if len(path) > best_len:
                    best_len = len(path)
                    best = tuple(path)
            if w <= s or (state["on"] >> w) & 1:
                continue
            path.append(w)
            state["on"] ^= 1 << w
            colors.add(c)
            dfs(s, colors, allowed_left - 1)
            colors.discard(c)
            state["on"] ^= 1 << w
            path.pop()

    for s in range(n):
        path[:] = [s]
        state["on"] = 1 << s
        dfs(s, set(), n - s - 1)
        if best_len == n:
            break
    return best_len, best


def brute_longest_rainbow_path(
    g: ColoredGraph, cap: int = 12
) -> tuple[int, Path | None]:
    """Exact maximum vertex count of a rainbow path (a single vertex counts as 1)."""
    n = g.n
    if n > cap:
        raise InstanceTooLarge(f"n={n} exceeds cap {cap}")
    if n == 0:
        return 0, None
    nbrs = _neighbors_by_color(g)
    best_len = 1
    best: Path | None = (0,)
    path: list[int] = []
    state = {"on": 0}

    def dfs(colors: set[int]):
        nonlocal best_len, best
        if len(path) > best_len and path[0] <= path[-1]:
            best_len = len(path)
            best = tuple(path)
        if best_len == n:
            return
        cur = path[-1]
        for w, c in nbrs[cur]:
            if (state["on"] >> w) & 1 or c in colors:
                continue
            path.append(w)
            state["on"] ^= 1 << w
            colors.add(c)
            dfs(colors)
            colors.discard(c)
            state["on"] ^= 1 << w
            path.pop()

    for s in range(n):
        path[:] = [s]
        state["on"] = 1 << s
        dfs(set())
        if best_len == n:
            break
    return best_len, best


def brute_min_spanning_forest(
    g: ColoredGraph, cap: int = 9
) -> tuple[int, Paths]:
    """Exact minimum path count over spanning rainbow path forests of g.

    All singletons is always feasible, so the answer is at most n.  Each new
    path starts at the lowest uncovered vertex and grows right then left, with
    a mirror-image dedup on the two growth directions.
    """
    n = g.n
    if n > cap:
        raise InstanceTooLarge(f"n={n} exceeds cap {cap}")
    nbrs = _neighbors_by_color(g)
    best_count = n
    best_forest: Paths = tuple((v,) for v in range(n))
    if n == 0:
        return 0, ()

    acc: list[Path] = []

    def next_component(uncovered: int, colors: frozenset[int], count: int):
        nonlocal best_count, best_forest
        if uncovered == 0:
            if count < best_count:
                best_count = count
                best_forest = tuple(acc)
            return
        if count + 1 >= best_count:
            return
        v = (uncovered & -uncovered).bit_length() - 1
        grow([v], uncovered ^ (1 << v), colors, count, first_right=None, left_phase=False)

    def finish(seq: list[int], uncovered: int, colors: frozenset[int], count: int):
        acc.append(tuple(seq))
        next_component(uncovered, colors, count + 1)
        acc.pop()

    def grow(
        seq: list[int],
        uncovered: int,
        colors: frozenset[int],
        count: int,
        first_right: int | None,
        left_phase: bool,
    ):
        finish(seq, uncovered, colors, count)
        if not left_phase:
            cur = seq[-1]
            for w, c in nbrs[cur]:
                if not (uncovered >> w) & 1 or c in colors:
                    continue
                grow(
                    seq + [w],
                    uncovered ^ (1 << w),
                    colors | {c},
                    count,
                    first_right if first_right is not None else w,
                    False,
                )
            if first_right is not None:
                grow(seq, uncovered, colors, count, first_right, True)
        else:
            cur = seq[0]
            for w, c in nbrs[cur]:
                if not (uncovered >> w) & 1 or c in colors:
                    continue
                if len(seq) > 1 and seq[-1] == first_right and w <= first_right:
                    continue  # mirror image of a right-first growth
                grow(
                    [w] + seq,
                    uncovered ^ (1 << w),
                    colors | {c},
                    count,
                    first_right,
                    True,
                )

    next_component((1 << n) - 1, frozenset(), 0)
    return best_count, best_forest


# -- exhaustive swap closure -------------------------------------------------
#
# Deliberately separate from the forest module's swap machinery: states are
# rebuilt from edge sets, so agreement between the two is a real check.


def _canon(paths: Iterable[Sequence[int]]) -> Paths:
    out = []
    for p in paths:
        t = tuple(p)
        r = tuple(reversed(t))
        out.append(t if t <= r else r)
    return tuple(sorted(out))


def _rebuild_from_edges(vertices: set[int], edges: set[tuple[int, int]]) -> Paths:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    paths = []
    seen: set[int] = set()
    for v in sorted(vertices):
        if v in seen or len(adj[v]) > 1:
            continue
        seq = [v]
        seen.add(v)
        prev = None
        cur = v
        while True:
            nxts = [w for w in adj[cur] if w != prev]
            if not nxts:
                break
            prev, cur = cur, nxts[0]
            seq.append(cur)
            seen.add(cur)
        paths.append(tuple(seq))
    if len(seen) != len(vertices):
        raise AssertionError("edge set does not form a path forest")
    return _canon(paths)


def _closure_swaps(state: Paths, g: ColoredGraph):
    color_edge = {}
    for p in state:
        for k in range(len(p) - 1):
            e = canon_edge(p[k], p[k + 1])
            color_edge[g.color_of(*e)] = e
    ends = []
    for i, p in enumerate(state):
        ends.append((p[0], i))
        if len(p) > 1:
            ends.append((p[-1], i))
    for a in range(len(ends)):
        u, pi = ends[a]
        for b in range(a + 1, len(ends)):
            v, pj = ends[b]
            if pi == pj or not g.has_edge(u, v):
                continue
            c = g.color_of(u, v)
            yield canon_edge(u, v), color_edge.get(c), c


@dataclass
class SwapClosureStats:
    forests_visited: int
    min_p: int
    min_forest: Paths
    endpoint_union: frozenset[int]
    associated_colors: frozenset[int]
    truncated: bool
    states: list[Paths] | None = None


def swap_closure(
    start_paths: Iterable[Sequence[int]],
    g: ColoredGraph,
    cap: int = 1_000_000,
    collect: bool = False,
) -> SwapClosureStats:
    """Exhaustive BFS over all forests reachable from the start by swaps.

    Returns the closure statistics; with `truncated` set the numbers are only
    bounds (the search stopped at `cap` visited forests).  With collect=True
    the full list of visited forests is attached.
    """
    start = _canon(start_paths)
    visited = {start}
    frontier = [start]
    min_p = len(start)
    min_forest = start
    endpoints: set[int] = set()
    colors: set[int] = set()
    truncated = False
    while frontier and not truncated:
        nxt = []
        for state in frontier:
            for p in state:
                endpoints.add(p[0])
                endpoints.add(p[-1])
            vertices = {v for p in state for v in p}
            edges = {
                canon_edge(p[k], p[k + 1]) for p in state for k in range(len(p) - 1)
            }
            for added, removed, c in _closure_swaps(state, g):
                colors.add(c)
                new_edges = set(edges)
                new_edges.add(added)
                if removed is not None:
                    new_edges.discard(removed)
                child = _rebuild_from_edges(vertices, new_edges)
                if child in visited:
                    continue
                visited.add(child)
                if len(child) < min_p:
                    min_p = len(child)
                    min_forest = child
                nxt.append(child)
                if len(visited) >= cap:
                    truncated = True
                    break
            if truncated:
                break
        frontier = sorted(nxt)
    return SwapClosureStats(
        forests_visited=len(visited),
        min_p=min_p,
        min_forest=min_forest,
        endpoint_union=frozenset(endpoints),
        associated_colors=frozenset(colors),
        truncated=truncated,
        states=sorted(visited) if collect else None,
    )


# -- iterated peeling of swap-optimal forests --------------------------------


@dataclass
class ChainLevel:
    j: int
    forest: Paths
    n_j: int
    endpoint_union: frozenset[int]
    colors: frozenset[int]
    closure_size: int


@dataclass
class ChainResult:
    k: int
    levels: dict[int, ChainLevel]  # j -> level data, j = k .. 1
    delta_n: float  # n minus the minimum degree of the host


def build_optimal_chain(g: ColoredGraph, cap: int = 500_000) -> ChainResult:
    """Peel a minimum spanning forest down one path at a time.

    Start from an optimal (hence swap-optimal) spanning forest with k paths.
    For each endpoint x reachable in the closure, remove the shortest path
    ending at x over all closure members, then keep the choice whose reduced
    forest has the smallest reachable-endpoint set.  Each reduced forest is
    again swap-optimal, giving data for the per-level degree and edge bounds.
    """
    if g.n > 7:
        raise InstanceTooLarge("chain construction is exhaustive; use n <= 7")
    k, fk = brute_min_spanning_forest(g)
    levels: dict[int, ChainLevel] = {}
    cur = _canon(fk)
    j = k
    while True:
        stats = swap_closure(cur, g, cap=cap, collect=True)
        if stats.truncated:
            raise InstanceTooLarge("closure cap hit during chain construction")
        levels[j] = ChainLevel(
            j=j,
            forest=cur,
            n_j=len(stats.endpoint_union),
            endpoint_union=stats.endpoint_union,
            colors=stats.associated_colors,
            closure_size=stats.forests_visited,
        )
        if j == 1:
            break
        best = None  # (reduced endpoint count, x, reduced forest)
        for x in sorted(stats.endpoint_union):
            cand = None  # (len(P), P, F)
            for state in stats.states:
                for p in state:
                    if p[0] == x or p[-1] == x:
                        key = (len(p), p, state)
                        if cand is None or key < cand:
                            cand = key
            assert cand is not None
            _, path, state = cand
            reduced = tuple(q for q in state if q != path)
            rstats = swap_closure(reduced, g, cap=cap)
            if rstats.truncated:
                raise InstanceTooLarge("closure cap hit during chain construction")
            if not rstats.endpoint_union <= stats.endpoint_union:
                raise AssertionError("reduced closure escaped the parent endpoint set")
            key = (len(rstats.endpoint_union), x)
            if best is None or key < (best[0], best[1]):
                best = (len(rstats.endpoint_union), x, reduced)
        cur = best[2]
        j -= 1
    return ChainResult(k=k, levels=levels, delta_n=float(g.n - g.min_degree()))


@dataclass
class ChainBoundsReport:
    color_count_bounds: list[tuple[int, int, int, float, float, bool]]
    degree_upper_bounds: list[tuple[int, int, int, int, bool]]
    degree_lower_bounds: list[tuple[int, int, int, float, bool]]
    edge_count_bounds: list[tuple[int, int, float, int, float, bool]]
    edge_bounds_vacuous: bool
    m_offset: int
    m_range_vacuous: bool

    def all_hold(self) -> bool:
        return (
            all(r[-1] for r in self.color_count_bounds)
            and all(r[-1] for r in self.degree_upper_bounds)
            and all(r[-1] for r in self.degree_lower_bounds)
            and all(r[-1] for r in self.edge_count_bounds)
        )


def check_chain_bounds(g: ColoredGraph, chain: ChainResult) -> ChainBoundsReport:
    """Evaluate the per-level color-count, degree, and edge-count bounds.

    color_count_bounds: n_j/2 - j <= |C_j| <= n_j - j for every level.
    degree_bounds: d_j(x) <= |C_j| for x in A_j; and for j >= 2,
            d_j(x, A_j) >= n_{j-1} - delta_n.
    edge_count_bounds: for 2 <= j < l <= k, the sandwich on e_j(A_l \\ A_j, A_j).
    Vacuous index ranges are reported, not silently passed.
    """
    dn = chain.delta_n
    color_count_bounds = []
    degree_upper_bounds = []
    degree_lower_bounds = []
    edge_count_bounds = []
    subs = {
        j: subgraph_by_colors(g, lvl.colors) for j, lvl in chain.levels.items()
    }
    for j in sorted(chain.levels):
        lvl = chain.levels[j]
        cj = len(lvl.colors)
        low, high = lvl.n_j / 2 - j, lvl.n_j - j
        color_count_bounds.append((j, lvl.n_j, cj, low, high, low <= cj <= high))
        gj = subs[j]
        for x in sorted(lvl.endpoint_union):
            dx = gj.degree(x)
            degree_upper_bounds.append((j, x, dx, cj, dx <= cj))
            if j >= 2 and (j - 1) in chain.levels:
                aj = lvl.endpoint_union
                dxa = len(set(gj.neighbors(x)) & aj)
                bound = chain.levels[j - 1].n_j - dn
                degree_lower_bounds.append((j, x, dxa, bound, dxa >= bound))
    k = chain.k
    for j in sorted(chain.levels):
        for ell in sorted(chain.levels):
            if not (2 <= j < ell <= k):
                continue
            aj = chain.levels[j].endpoint_union
            al = chain.levels[ell].endpoint_union
            njv = chain.levels[j].n_j
            nlv = chain.levels[ell].n_j
            njm1 = chain.levels[j - 1].n_j
            nlm1 = chain.levels[ell - 1].n_j
            diff = sorted(al - aj)
            e_val = count_edges_between(subs[j], diff, sorted(aj)) if diff else 0
            lower = (nlv - njv) * (1.5 * njv - 2 * nlv + nlm1 - dn)
            upper = njv * (njv - njm1 - j + dn)
            edge_count_bounds.append((j, ell, lower, e_val, upper, lower <= e_val <= upper))
    m_off = math.ceil(3 * dn)
    m_vac = not any(
        m_off <= j < ell <= k for j in chain.levels for ell in chain.levels
    )
    return ChainBoundsReport(
        color_count_bounds=color_count_bounds,
        degree_upper_bounds=degree_upper_bounds,
        degree_lower_bounds=degree_lower_bounds,
        edge_count_bounds=edge_count_bounds,
        edge_bounds_vacuous=not edge_count_bounds,
        m_offset=m_off,
        m_range_vacuous=m_vac,
    )


# -- sequence condition and bound (exact arithmetic) -------------------------


@dataclass(frozen=True)
class SequenceCheckInput:
    """Data for the path-count sequence bound: a rate c in (0, 1], an offset m,
    and a strictly increasing positive integer sequence."""

    c: Fraction
    m: int
    seq: tuple[int, ...]

    def __post_init__(self):
        if not 0 < self.c <= 1:
            raise ValueError("c must lie in (0, 1]")
        if self.m < 0:
            raise ValueError("m must be >= 0")
        prev = 0
        for v in self.seq:
            if v <= prev:
                raise ValueError("sequence must be strictly increasing and positive")
            prev = v

    @property
    def r(self) -> Fraction:
        return 1 + self.c / 3


def _pair_holds(c: Fraction, seq: Sequence[int], j: int, ell: int) -> bool:
    """The gap condition for 1-based pair (j, ell); n_0 is taken as 0."""
    num, den = c.numerator, c.denominator
    nj = seq[j - 1]
    njm1 = seq[j - 2] if j >= 2 else 0
    nl = seq[ell - 1]
    nlm1 = seq[ell - 2]
    lhs = den * nj * (nj - njm1)
    rhs = (nl - nj) * ((den + num) * nj - den * (2 * nl - nlm1))
    return lhs >= rhs


def verify_sequence_condition(inp: SequenceCheckInput) -> bool:
    """True iff the gap inequality holds for every pair max(m,1) <= j < ell <= k."""
    k = len(inp.seq)
    j_lo = max(inp.m, 1)
    for j in range(j_lo, k):
        for ell in range(j + 1, k + 1):
            if not _pair_holds(inp.c, inp.seq, j, ell):
                return False
    return True


def first_violating_pair(inp: SequenceCheckInput) -> tuple[int, int] | None:
    k = len(inp.seq)
    for j in range(max(inp.m, 1), k):
        for ell in range(j + 1, k + 1):
            if not _pair_holds(inp.c, inp.seq, j, ell):
                return j, ell
    return None


def log_base_r_bracket(r: Fraction, x: int, precision_bits: int = 4) -> tuple[Fraction, Fraction]:
    """Exact bracket [lo, hi] of log_r(x) with hi - lo = 2**-precision_bits.

    Comparisons r**(p/q) <= x are decided by integer exponentiation, so the
    bracket never suffers float rounding.
    """
    if r <= 1:
        raise ValueError("need r > 1")
    if x < 1:
        raise ValueError("need x >= 1")
    if x == 1:
        return Fraction(0), Fraction(0)
    P, Q = r.numerator, r.denominator

    def r_pow_le(num: int, den_pow2: int) -> bool:
        # r**(num / 2**den_pow2) <= x
        s = 1 << den_pow2
        return P**num <= (x**s) * (Q**num)

    hi = 1
    while r_pow_le(hi, 0):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if r_pow_le(mid, 0):
            lo = mid
        else:
            hi = mid
    lo_f, hi_f = Fraction(lo), Fraction(lo + 1)
    for t in range(1, precision_bits + 1):
        mid = (lo_f + hi_f) / 2
        if r_pow_le(mid.numerator * (1 << t) // mid.denominator, t):
            lo_f = mid
        else:
            hi_f = mid
    return lo_f, hi_f


@dataclass
class BoundCheck:
    bound_low: Fraction
    bound_high: Fraction
    holds: bool  # certified: k is at most the conservative lower bound value
    violation_certain: bool


def verify_sequence_bound(inp: SequenceCheckInput) -> BoundCheck:
    """Check k <= (log_r n_k)^2 + 2 log_r n_k + m + 1 with conservative rounding.

    Requires the gap condition to hold first (ConditionNotVerified otherwise).
    `holds` is reported only when certain under the exact log bracket.
    """
    if not verify_sequence_condition(inp):
        raise ConditionNotVerified("the gap condition fails; the bound is not claimed")
    k = len(inp.seq)
    lo, hi = log_base_r_bracket(inp.r, inp.seq[-1])
    bound_low = lo * lo + 2 * lo + inp.m + 1
    bound_high = hi * hi + 2 * hi + inp.m + 1
    return BoundCheck(
        bound_low=bound_low,
        bound_high=bound_high,
        holds=k <= bound_low,
        violation_certain=k > bound_high,
    )


def bound_floor_table(limit: int, c: Fraction, m: int) -> list[int]:
    """table[x] = largest integer k certified to satisfy the bound when n_k = x."""
    r = 1 + c / 3
    table = [0] * (limit + 1)
    for x in range(1, limit + 1):
        lo, _ = log_base_r_bracket(r, x)
        val = lo * lo + 2 * lo + m + 1
        table[x] = int(val)  # floor for non-negative Fractions
    return table


@dataclass
class SweepStats:
    limit: int
    total_sequences: int
    condition_satisfied: int
    bound_violations: int  # conservative: counts any satisfying sequence not certified
    sum_k: int
    max_k: int
    backend: str


def sequence_bound_sweep(limit: int, c: Fraction, m: int) -> SweepStats:
    """Enumerate every strictly increasing sequence with n_k <= limit, check the
    gap condition exactly, and test the bound on every satisfying sequence.

    Dispatches to the compiled kernel when available; the pure fallback is
    identical but only practical for small limits.
    """
    from . import _kernels

    table = bound_floor_table(limit, c, m)
    total, satisfied, violations, sum_k, max_k = _kernels.seq_sweep(
        limit, c.numerator, c.denominator, m, table
    )
    return SweepStats(
        limit=limit,
        total_sequences=total,
        condition_satisfied=satisfied,
        bound_violations=violations,
        sum_k=sum_k,
        max_k=max_k,
        backend=_kernels.BACKEND,
    )
