"""Long rainbow cycles by four-way color splitting and rotation-extension.

The pipeline: split the host's color classes into three random helper graphs
H1, H2, H3 and a remainder G; grow a rainbow path forest in G; repeatedly
extend the first path by splicing in donor paths, reached through at most two
rotation/absorption helper edges plus one hit edge (each from a distinct
helper graph, whose color class is then removed so the forest stays rainbow);
finally close the long path into a cycle with one or two helper edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    BelowFloor,
    DegenerateP,
    NoClosure,
    NoExtensionFound,
    PipelinePrecondition,
)
from .forest import PathForest, greedy_rainbow_forest
from .graph import ColoredGraph, canon_edge, subgraph_by_colors
from .oracle import verify_rainbow_cycle
from .rng import SplitMix64, derive_seed

Edge = tuple[int, int]


@dataclass(frozen=True)
class PipelineParams:
    n: int
    C: float
    seed: int
    p: float
    a: int
    b: int
    delta: float
    gamma: float
    iter_cap: int
    epsilon: float = 0.25  # band width for the split degree report only

    @staticmethod
    def derive(
        n: int,
        C: float,
        seed: int,
        *,
        a: int | None = None,
        b: int | None = None,
        delta: float | None = None,
        gamma: float | None = None,
        iter_cap: int | None = None,
        epsilon: float = 0.25,
    ) -> "PipelineParams":
        if n < 2:
            raise ValueError("need n >= 2")
        logn = math.log2(n)
        p = C * logn / math.sqrt(n)
        if not 0 < p < 1:
            raise DegenerateP(f"p = C*log2(n)/sqrt(n) = {p:.4f} must lie in (0, 1)")
        return PipelineParams(
            n=n,
            C=C,
            seed=seed,
            p=p,
            a=a if a is not None else math.isqrt(n - 1) + 1,
            b=b if b is not None else max(1, n // 4),
            delta=delta if delta is not None else min(4 * p, 1 / 8),
            gamma=gamma if gamma is not None else 1.0 / (C * logn * math.sqrt(n)),
            iter_cap=iter_cap if iter_cap is not None else math.isqrt(n - 1) + 1,
            epsilon=epsilon,
        )


@dataclass
class DegreeReport:
    name: str
    low: float
    high: float
    min_degree: int
    max_degree: int
    within_band: bool


@dataclass
class SplitBundle:
    host: ColoredGraph
    G: ColoredGraph
    H1: ColoredGraph
    H2: ColoredGraph
    H3: ColoredGraph
    params: PipelineParams
    degree_reports: list[DegreeReport] = field(default_factory=list)
    removal_log: list[tuple[int, int, int]] = field(default_factory=list)

    def helper(self, j: int) -> ColoredGraph:
        return (self.H1, self.H2, self.H3)[j - 1]


def _pick_classes(colors: list[int], p: float, seed: int) -> list[int]:
    rng = SplitMix64(seed)
    return [c for c in sorted(colors) if rng.next_float() < p]


def split_four(host: ColoredGraph, C: float, seed: int, **overrides) -> SplitBundle:
    """Three sequential rounds of color-class sampling: H1 from the host, H2
    from the remainder, H3 from what is left; G keeps the rest.

    The four graphs partition the host's edges and colors.  Deterministic for
    a fixed seed.
    """
    params = PipelineParams.derive(host.n, C, seed, **overrides)
    rest = host
    helpers = []
    reports = []
    n = host.n
    for j in (1, 2, 3):
        kept = _pick_classes(rest.colors(), params.p, derive_seed(seed, j))
        hj = subgraph_by_colors(host, kept)
        rest = subgraph_by_colors(rest, [c for c in rest.colors() if c not in set(kept)])
        helpers.append(hj)
        lo = (1 - 1.2 * params.epsilon) * params.p * (n - 1)
        hi = (1 + 1.2 * params.epsilon) * params.p * (n - 1)
        reports.append(
            DegreeReport(
                name=f"H{j}",
                low=lo,
                high=hi,
                min_degree=hj.min_degree(),
                max_degree=int(hj.degrees().max()) if n else 0,
                within_band=bool(lo <= hj.min_degree() and hj.degrees().max() <= hi),
            )
        )
    return SplitBundle(
        host=host,
        G=rest,
        H1=helpers[0],
        H2=helpers[1],
        H3=helpers[2],
        params=params,
        degree_reports=reports,
    )


class _LiveState:
    """Mutable adjacency of the helper graphs during the extension loop.

    Color lookups go through the immutable helper graphs; presence is tracked
    by bitsets so class removal is cheap.
    """

    def __init__(self, bundle: SplitBundle):
        self.bundle = bundle
        self.n = bundle.host.n
        self.adj = {j: list(bundle.helper(j).adjacency_bits()) for j in (1, 2, 3)}
        self.live_colors = {j: set(bundle.helper(j).colors()) for j in (1, 2, 3)}
        self.removed: list[tuple[int, int, int]] = []

    def color_of(self, j: int, u: int, v: int) -> int:
        return self.bundle.helper(j).color_of(u, v)

    def remove_class(self, rnd: int, j: int, color: int) -> None:
        if color not in self.live_colors[j]:
            return
        self.live_colors[j].discard(color)
        adj = self.adj[j]
        for u, v in self.bundle.helper(j).class_edges(color):
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        self.removed.append((rnd, j, color))


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass
class ExtensionStepResult:
    new_forest: PathForest
    ordered_paths: list[tuple[int, ...]]  # new P1 first, donors in stable order
    helper_edges: dict[int, Edge]
    removed_colors: dict[int, int]
    donor_index: int
    donor_before: int
    donor_after: int
    level: int
    anchor_reversed: bool
    p1_before: int
    p1_after: int


def _extension_step(
    host: ColoredGraph, state: _LiveState, paths: list[tuple[int, ...]]
) -> ExtensionStepResult:
    """One extension of paths[0], mirroring the layered rotation search:
    level 0 direct hit, level 1 one helper edge, level 2 two helper edges,
    each from a distinct helper graph, trying both path orientations."""
    n = host.n
    seq_fwd = list(paths[0])
    m = len(seq_fwd)
    covered = 0
    for p in paths:
        for v in p:
            covered |= 1 << v
    p1_mask = 0
    for v in seq_fwd:
        p1_mask |= 1 << v
    t_mask = covered & ~p1_mask
    u_mask = ((1 << n) - 1) & ~covered
    u_size = n - covered.bit_count()
    a = state.bundle.params.a
    if m > n - a - u_size:
        raise PipelinePrecondition(
            f"|P1| = {m} exceeds n - a - |U| = {n - a - u_size}"
        )
    for j in (1, 2, 3):
        clash = state.live_colors[j].intersection(
            host.color_of(p[k], p[k + 1])
            for p in paths
            for k in range(len(p) - 1)
        )
        if clash:
            raise PipelinePrecondition(
                f"forest colors {sorted(clash)[:4]} still live in H{j}"
            )
    donor_of = {}
    for i, p in enumerate(paths):
        if i == 0:
            continue
        for v in p:
            donor_of[v] = i

    def hits_from(w: int, used: tuple[int, ...]):
        for j3 in (1, 2, 3):
            if j3 in used:
                continue
            for x in _bits(state.adj[j3][w] & t_mask):
                yield x, j3

    def y_moves(seq: list[int], pos: dict[int, int]):
        """Level-1 moves: absorb a free vertex before the first endpoint, or
        rotate at a chord target; yields (j1, exposed endpoint, type, chord pos)."""
        v1 = seq[0]
        for j1 in (1, 2, 3):
            nb = state.adj[j1][v1]
            for y in _bits(nb & u_mask):
                yield j1, y, "absorb", -1
            for yt in _bits(nb & p1_mask):
                t = pos[yt]
                if t >= 2:
                    yield j1, seq[t - 1], "rotate", t

    best = None  # (key, helpers, builder, x, j3, donor_index, plen)

    def consider(plen, helpers, builder, x, j3):
        nonlocal best
        di = donor_of[x]
        d = paths[di]
        tpos = d.index(x)
        longer = max(tpos + 1, len(d) - tpos)
        key = (-(plen + longer), di, x, j3)
        if best is None or key < best[0]:
            best = (key, dict(helpers), builder, x, j3, di, plen)

    for level in (0, 1, 2):
        for rev in (False, True):
            seq = list(reversed(seq_fwd)) if rev else seq_fwd
            pos = {v: i for i, v in enumerate(seq)}
            if level == 0:
                w = seq[0]
                for x, j3 in hits_from(w, ()):
                    consider(m, {j3: (w, x)}, (lambda s=seq: list(s)), x, j3)
            elif level == 1:
                for j1, w1, kind, t in y_moves(seq, pos):
                    e1 = (seq[0], seq[t]) if kind == "rotate" else (seq[0], w1)
                    plen = m if kind == "rotate" else m + 1

                    def build(s=seq, k=kind, tt=t, y=w1):
                        if k == "absorb":
                            return [y] + list(s)
                        return list(reversed(s[:tt])) + list(s[tt:])

                    for x, j3 in hits_from(w1, (j1,)):
                        consider(plen, {j1: e1, j3: (w1, x)}, build, x, j3)
            else:
                for j1, y, kind, t in y_moves(seq, pos):
                    e1 = (seq[0], seq[t]) if kind == "rotate" else (seq[0], y)
                    base_len = m if kind == "rotate" else m + 1
                    in_path = set()
                    if kind == "absorb":
                        in_path.add(y)
                    for j2 in (1, 2, 3):
                        if j2 == j1:
                            continue
                        nb2 = state.adj[j2][y]
                        for v in _bits(nb2 & u_mask):
                            if v in in_path:
                                continue
                            w2 = v

                            def build_u(s=seq, k=kind, tt=t, yy=y, vv=v):
                                if k == "absorb":
                                    return [vv, yy] + list(s)
                                return [vv] + list(reversed(s[:tt])) + list(s[tt:])

                            for x, j3 in hits_from(w2, (j1, j2)):
                                consider(
                                    base_len + 1,
                                    {j1: e1, j2: (y, v), j3: (w2, x)},
                                    build_u,
                                    x,
                                    j3,
                                )
                        for v in _bits(nb2 & p1_mask):
                            kz = pos[v]
                            if kind == "absorb":
                                if kz < 1:
                                    continue
                                w2 = seq[kz - 1]

                                def build_p(s=seq, yy=y, kk=kz):
                                    return (
                                        list(reversed(s[:kk])) + [yy] + list(s[kk:])
                                    )
                            else:
                                if kz >= t + 1:
                                    w2 = seq[kz - 1]

                                    def build_p(s=seq, tt=t, kk=kz):
                                        return (
                                            list(reversed(s[tt:kk]))
                                            + list(s[:tt])
                                            + list(s[kk:])
                                        )
                                elif kz <= t - 3:
                                    w2 = seq[kz + 1]

                                    def build_p(s=seq, tt=t, kk=kz):
                                        return (
                                            list(s[kk + 1 : tt])
                                            + list(reversed(s[: kk + 1]))
                                            + list(s[tt:])
                                        )
                                else:
                                    continue
                            for x, j3 in hits_from(w2, (j1, j2)):
                                consider(
                                    base_len,
                                    {j1: e1, j2: (y, v), j3: (w2, x)},
                                    build_p,
                                    x,
                                    j3,
                                )
            if best is not None:
                return _apply_hit(host, state, paths, best, level, rev)
    raise NoExtensionFound(
        "no direct, one-helper, or two-helper extension exists",
        diagnostics={
            "p1_len": m,
            "paths": len(paths),
            "t_size": t_mask.bit_count(),
            "u_size": u_size,
            "live_colors": {j: len(state.live_colors[j]) for j in (1, 2, 3)},
        },
    )


def _apply_hit(host, state, paths, best, level, rev) -> ExtensionStepResult:
    _, helpers, builder, x, j3, di, _ = best
    pseq = builder()
    d = paths[di]
    tpos = d.index(x)
    side1 = list(d[: tpos + 1])  # ends at x
    side2 = list(d[tpos:])  # starts at x
    if len(side1) >= len(side2):
        longer, rest = side1, list(d[tpos + 1 :])
    else:
        longer, rest = list(reversed(side2)), list(d[:tpos])
    p1_new = tuple(longer + pseq)
    new_paths = [p1_new]
    for i, p in enumerate(paths):
        if i == 0:
            continue
        if i == di:
            if rest:
                new_paths.append(tuple(rest))
        else:
            new_paths.append(p)
    helper_edges = {j: canon_edge(*e) for j, e in helpers.items()}
    removed = {j: state.color_of(j, *e) for j, e in helper_edges.items()}
    forest = PathForest(host, new_paths)
    assert len(rest) < len(d) / 2
    assert len(p1_new) >= len(paths[0]) + len(d) - len(rest)
    return ExtensionStepResult(
        new_forest=forest,
        ordered_paths=new_paths,
        helper_edges=helper_edges,
        removed_colors=removed,
        donor_index=di,
        donor_before=len(d),
        donor_after=len(rest),
        level=level,
        anchor_reversed=rev,
        p1_before=len(paths[0]),
        p1_after=len(p1_new),
    )


def path_builder_step(bundle: SplitBundle, forest: PathForest) -> ExtensionStepResult:
    """Public single-step extension against the bundle's full helper graphs."""
    state = _LiveState(bundle)
    paths = list(forest.paths)
    paths.sort(key=lambda p: (-len(p), p))
    return _extension_step(bundle.host, state, paths)


@dataclass
class RoundRecord:
    round: int
    donor_id: int
    level: int
    anchor_reversed: bool
    helpers: dict[int, Edge]
    removed_colors: dict[int, int]
    p1_before: int
    p1_after: int
    donor_before: int
    donor_after: int
    u_size: int


@dataclass
class ExtendResult:
    forest: PathForest
    p1: tuple[int, ...]
    rounds: list[RoundRecord]
    reason: str
    target: float
    donor_use_counts: dict[int, int]
    diagnostics: dict | None = None


def extend_to_long_path(
    bundle: SplitBundle,
    forest: PathForest,
    state: _LiveState | None = None,
) -> ExtendResult:
    """Iterate the extension step, removing each used helper color class from
    its helper graph, until the first path is long enough, the hypothesis
    margin is exhausted, the step finds nothing (the observable signal that a
    helper graph stopped expanding), or the iteration cap is hit."""
    params = bundle.params
    n = bundle.host.n
    state = state or _LiveState(bundle)
    paths = list(forest.paths)
    paths.sort(key=lambda p: (-len(p), p))
    donor_ids = list(range(len(paths)))  # stable ids; id 0 is P1
    use_counts: dict[int, int] = {}
    target = n - 4 * params.delta * n - params.a
    rounds: list[RoundRecord] = []
    reason = "target"
    diagnostics = None
    while True:
        if not paths:
            reason = "empty_forest"
            break
        if len(paths[0]) >= target:
            reason = "target"
            break
        if len(paths) == 1:
            reason = "no_donors"
            break
        u_size = n - sum(len(p) for p in paths)
        if len(paths[0]) > n - params.a - u_size:
            reason = "hypothesis"
            break
        if len(rounds) >= params.iter_cap:
            reason = "iteration_cap"
            break
        try:
            step = _extension_step(bundle.host, state, paths)
        except NoExtensionFound as exc:
            reason = "no_extension"
            diagnostics = exc.diagnostics
            break
        rnd = len(rounds) + 1
        for j, color in step.removed_colors.items():
            state.remove_class(rnd, j, color)
        di = step.donor_index
        donor_id = donor_ids[di]
        use_counts[donor_id] = use_counts.get(donor_id, 0) + 1
        donor_survived = step.donor_after > 0
        new_ids = [donor_ids[0]]
        for i in range(1, len(paths)):
            if i == di and not donor_survived:
                continue
            new_ids.append(donor_ids[i])
        paths = step.ordered_paths
        donor_ids = new_ids
        rounds.append(
            RoundRecord(
                round=rnd,
                donor_id=donor_id,
                level=step.level,
                anchor_reversed=step.anchor_reversed,
                helpers=step.helper_edges,
                removed_colors=step.removed_colors,
                p1_before=step.p1_before,
                p1_after=step.p1_after,
                donor_before=step.donor_before,
                donor_after=step.donor_after,
                u_size=u_size,
            )
        )
    bundle.removal_log.extend(state.removed)
    return ExtendResult(
        forest=PathForest(bundle.host, paths),
        p1=tuple(paths[0]) if paths else (),
        rounds=rounds,
        reason=reason,
        target=target,
        donor_use_counts=use_counts,
        diagnostics=diagnostics,
    )


def bundle_from_parts(
    host: ColoredGraph,
    g: ColoredGraph,
    h1: ColoredGraph,
    h2: ColoredGraph,
    h3: ColoredGraph,
    params: PipelineParams,
) -> SplitBundle:
    """Assemble a bundle from explicit subgraphs, enforcing the partition
    invariants (pairwise disjoint color sets, edges partition the host)."""
    parts = [g, h1, h2, h3]
    seen_colors: set[int] = set()
    total_edges = 0
    for part in parts:
        cols = set(part.colors())
        if cols & seen_colors:
            raise ValueError(f"color sets overlap: {sorted(cols & seen_colors)}")
        seen_colors |= cols
        total_edges += part.num_edges
        for u, v, c in part.edges():
            if host.color_of(u, v) != c:
                raise ValueError(f"edge ({u}, {v}) disagrees with the host")
    if total_edges != host.num_edges:
        raise ValueError("parts do not partition the host's edges")
    return SplitBundle(host=host, G=g, H1=h1, H2=h2, H3=h3, params=params)


@dataclass
class CloseResult:
    cycle: tuple[int, ...]
    mode: str  # direct | indirect
    closing_edges: list[Edge]


def close_cycle(
    bundle: SplitBundle,
    p1: tuple[int, ...],
    state: _LiveState | None = None,
) -> CloseResult:
    """Close a long rainbow path into a rainbow cycle.

    Direct mode uses one H1 edge between the first and last `a` vertices;
    otherwise one H1 chord plus one H2 edge reroute the path into a cycle
    covering everything between the chosen endpoints.
    """
    params = bundle.params
    a = params.a
    m = len(p1)
    if m < 3 * a:
        raise PipelinePrecondition(f"|P1| = {m} < 3a = {3 * a}")
    state = state or _LiveState(bundle)
    seq = list(p1)
    pos = {v: i for i, v in enumerate(seq)}
    a1_idx = range(a)
    a2_mask = 0
    for i in range(m - a, m):
        a2_mask |= 1 << seq[i]

    best = None  # (length, -i, i, k)
    for i in a1_idx:
        cand = state.adj[1][seq[i]] & a2_mask
        for v in _bits(cand):
            k = pos[v]
            if k - i + 1 >= 3 and (best is None or k - i > best[0]):
                best = (k - i, i, k)
    if best is not None:
        _, i, k = best
        cycle = tuple(seq[i : k + 1])
        return CloseResult(cycle=cycle, mode="direct", closing_edges=[canon_edge(seq[i], seq[k])])

    p1_mask = 0
    for v in seq:
        p1_mask |= 1 << v
    a1_mask = 0
    for i in a1_idx:
        a1_mask |= 1 << seq[i]
    chord_i: dict[int, int] = {}  # chord target position -> smallest source index
    for i in a1_idx:
        for v in _bits(state.adj[1][seq[i]] & p1_mask & ~a1_mask):
            t = pos[v]
            if t >= a and t not in chord_i:
                chord_i[t] = i
    bestind = None  # (k - i, j, i, k)
    for t in sorted(chord_i):
        j = t - 1
        i = chord_i[t]
        if j <= i:
            continue
        cand = state.adj[2][seq[j]] & a2_mask
        for v in _bits(cand):
            k = pos[v]
            if k <= t:
                continue
            if bestind is None or (k - i, -j) > (bestind[0], -bestind[1]):
                bestind = (k - i, j, i, k)
    if bestind is None:
        raise NoClosure(
            "no direct H1 edge and no (chord, H2) reroute closes the path",
            diagnostics={
                "p1_len": m,
                "a": a,
                "chords": len(chord_i),
                "h1_live": len(state.live_colors[1]),
                "h2_live": len(state.live_colors[2]),
            },
        )
    _, j, i, k = bestind
    t = j + 1
    cycle = tuple([seq[i]] + seq[t : k + 1] + seq[j : i : -1] + [seq[i]])[:-1]
    return CloseResult(
        cycle=cycle,
        mode="indirect",
        closing_edges=[canon_edge(seq[i], seq[t]), canon_edge(seq[k], seq[j])],
    )


@dataclass
class PipelineMetrics:
    n: int
    seed: int
    C: float
    p: float
    a: int
    b: int
    delta: float
    gamma: float
    forest_paths: int
    rounds: int
    removed_classes: int
    p1_len: int
    cycle_len: int
    deficit: int
    valid: bool


@dataclass
class PipelineRun:
    cycle: tuple[int, ...]
    metrics: PipelineMetrics
    extend: ExtendResult
    close: CloseResult
    bundle: SplitBundle


def long_rainbow_cycle(
    host: ColoredGraph,
    C: float,
    seed: int,
    floor: int = 64,
    **overrides,
) -> PipelineRun:
    """Full pipeline: split, greedy forest, extension loop, cycle closing.

    Every returned cycle is re-validated by the independent checker; an
    invalid cycle aborts the run instead of being reported.
    """
    n = host.n
    if n < floor:
        raise BelowFloor(f"n = {n} is below the configured floor {floor}")
    bundle = split_four(host, C, seed, **overrides)
    params = bundle.params
    greedy = greedy_rainbow_forest(bundle.G, params.gamma, params.delta)
    forest = PathForest(host, greedy.forest.paths)
    state = _LiveState(bundle)
    ext = extend_to_long_path(bundle, forest, state)
    p1 = ext.p1
    closed = close_cycle(bundle, p1, state)
    ok, why = verify_rainbow_cycle(host, closed.cycle)
    if not ok:
        raise AssertionError(f"pipeline produced an invalid cycle: {why}")
    metrics = PipelineMetrics(
        n=n,
        seed=seed,
        C=C,
        p=params.p,
        a=params.a,
        b=params.b,
        delta=params.delta,
        gamma=params.gamma,
        forest_paths=greedy.forest.path_count,
        rounds=len(ext.rounds),
        removed_classes=len(bundle.removal_log),
        p1_len=len(p1),
        cycle_len=len(closed.cycle),
        deficit=n - len(closed.cycle),
        valid=ok,
    )
    return PipelineRun(cycle=closed.cycle, metrics=metrics, extend=ext, close=closed, bundle=bundle)
