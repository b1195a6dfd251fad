"""Random color-class sampling and nearly-rainbow density checks.

A sampled subgraph keeps each color class independently with probability p
(one coin flip per color, ascending color order, from the documented seeded
stream).  Concentration of degrees and of pair densities is *measured*:
per-vertex bands, pair-density thresholds, and adversarial scans over many
random disjoint pairs, with worst cases re-validated and reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels, _fallback
from .errors import EmptySet, IndivisibleSize, NotSubgraph, OverlappingSets
from .graph import ColoredGraph, as_vertex_set, count_edges_between, subgraph_by_colors
from .rng import SplitMix64, derive_seed


@dataclass(frozen=True)
class SampleParams:
    p: float
    epsilon: float
    seed: int
    C: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ValueError("p must lie in (0, 1]")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.C <= 0:
            raise ValueError("C must be positive")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must lie in [0, 1)")


def sample_color_subgraph(g: ColoredGraph, params: SampleParams) -> ColoredGraph:
    """Keep each color class with probability p; deterministic per seed."""
    rng = SplitMix64(params.seed)
    kept = [c for c in sorted(g.colors()) if rng.next_float() < params.p]
    return subgraph_by_colors(g, kept)


def _require_color_subgraph(H: ColoredGraph, g: ColoredGraph) -> None:
    if H.n != g.n:
        raise NotSubgraph("vertex counts differ")
    hm = H.color_matrix()
    gm = g.color_matrix()
    mask = hm >= 0
    if not np.array_equal(hm[mask], gm[mask]):
        raise NotSubgraph("H has an edge or color not present in the host")
    h_colors = set(H.colors())
    g_index = g.class_index()
    h_index = H.class_index()
    for c in h_colors:
        if len(h_index[c]) != len(g_index[c]):
            raise NotSubgraph(f"color class {c} is only partially present")


@dataclass
class PairCheck:
    a: int
    b: int
    observed: int
    threshold: float
    passed: bool


@dataclass
class ConcentrationReport:
    p: float
    epsilon: float
    degree_ok: bool
    worst_vertex: int
    worst_ratio: float
    vertex_pass: np.ndarray
    pair_checks: list[PairCheck] = field(default_factory=list)


def check_degree_concentration(
    H: ColoredGraph, g: ColoredGraph, params: SampleParams
) -> ConcentrationReport:
    """Per-vertex check of d_H(v) against the (1 +- epsilon) * p * d_G(v) band."""
    _require_color_subgraph(H, g)
    dh = H.degrees().astype(np.float64)
    dg = g.degrees().astype(np.float64)
    center = params.p * dg
    dev = np.abs(dh - center)
    ok = dev <= params.epsilon * center + 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(center > 0, dh / center, np.where(dh > 0, np.inf, 1.0))
    worst = int(np.argmax(np.abs(ratio - 1.0)))
    return ConcentrationReport(
        p=params.p,
        epsilon=params.epsilon,
        degree_ok=bool(ok.all()),
        worst_vertex=worst,
        worst_ratio=float(ratio[worst]),
        vertex_pass=ok,
    )


def distinct_colors_between(g: ColoredGraph, A, B) -> int:
    sub = g.color_matrix()[np.ix_(list(A), list(B))]
    return int(np.unique(sub[sub >= 0]).size)


def is_nearly_rainbow(
    g: ColoredGraph, A, B, epsilon: float
) -> tuple[bool, int]:
    """True iff at least (1 - epsilon) * |A| * |B| distinct colors appear on E(A, B)."""
    sa = as_vertex_set(A, g.n)
    sb = as_vertex_set(B, g.n)
    if not sa or not sb:
        raise EmptySet("A and B must be nonempty")
    if set(sa) & set(sb):
        raise OverlappingSets("A and B must be disjoint")
    count = distinct_colors_between(g, sa, sb)
    return count >= (1.0 - epsilon) * len(sa) * len(sb), count


def check_pair_density(
    H: ColoredGraph, A, B, params: SampleParams
) -> PairCheck:
    """Compare e_H(A, B) against the (1 - epsilon) * p * |A| * |B| threshold."""
    sa = as_vertex_set(A, H.n)
    sb = as_vertex_set(B, H.n)
    if set(sa) & set(sb):
        raise OverlappingSets("A and B must be disjoint")
    observed = count_edges_between(H, sa, sb)
    threshold = (1.0 - params.epsilon) * params.p * len(sa) * len(sb)
    return PairCheck(
        a=len(sa), b=len(sb), observed=observed, threshold=threshold,
        passed=observed >= threshold,
    )


@dataclass
class PartitionResult:
    parts_a: list[tuple[int, ...]]
    parts_b: list[tuple[int, ...]]
    bad_fraction: float
    within_epsilon: bool
    trials: int


def partition_nearly_rainbow(
    g: ColoredGraph, A, B, y: int, epsilon: float, trials: int, seed: int
) -> PartitionResult:
    """Best-of-`trials` random partitions of A and B into parts of size y,
    minimizing the fraction of part pairs that are not nearly-rainbow."""
    if trials < 1:
        raise ValueError("need at least one trial")
    sa = list(as_vertex_set(A, g.n))
    sb = list(as_vertex_set(B, g.n))
    if set(sa) & set(sb):
        raise OverlappingSets("A and B must be disjoint")
    if y <= 0 or len(sa) % y or len(sb) % y:
        raise IndivisibleSize(f"y={y} must divide |A|={len(sa)} and |B|={len(sb)}")
    npairs = (len(sa) // y) * (len(sb) // y)
    best: PartitionResult | None = None
    for t in range(trials):
        rng = SplitMix64(derive_seed(seed, t))
        pa = list(sa)
        pb = list(sb)
        rng.shuffle(pa)
        rng.shuffle(pb)
        parts_a = [tuple(sorted(pa[i : i + y])) for i in range(0, len(pa), y)]
        parts_b = [tuple(sorted(pb[i : i + y])) for i in range(0, len(pb), y)]
        bad = 0
        for qa in parts_a:
            for qb in parts_b:
                ok, _ = is_nearly_rainbow(g, qa, qb, epsilon)
                if not ok:
                    bad += 1
        frac = bad / npairs
        if best is None or frac < best.bad_fraction:
            best = PartitionResult(
                parts_a=parts_a,
                parts_b=parts_b,
                bad_fraction=frac,
                within_epsilon=frac <= epsilon,
                trials=trials,
            )
        if best.bad_fraction == 0.0:
            break
    assert best is not None
    return best


@dataclass
class ScanResult:
    a: int
    b: int
    threshold: float
    samples: int
    worst_margin: float
    worst_pair: tuple[tuple[int, ...], tuple[int, ...]]
    violations: int
    margins: np.ndarray
    structured: list[tuple[str, int, float]]
    flagged: bool
    backend: str


def adversarial_pair_scan(
    H: ColoredGraph,
    g: ColoredGraph,
    a: int,
    b: int,
    params: SampleParams,
    samples: int,
    seed: int,
) -> ScanResult:
    """Search for pairs violating e_H(A, B) >= (1 - eps) * p * a * b.

    Scans `samples` random disjoint (A, B) pairs plus structured candidates
    built from the lowest-degree vertices of H; the worst random pair is
    reconstructed and re-counted directly before being reported.
    """
    n = H.n
    if a + b > n:
        raise ValueError(f"a + b = {a + b} exceeds n = {n}")
    threshold = (1.0 - params.epsilon) * params.p * a * b
    if threshold <= 0:
        raise ValueError("threshold must be positive")

    words = (n + 63) // 64
    bits = H.adjacency_bits()
    adj_words = np.zeros((n, words), dtype=np.uint64)
    for v in range(n):
        adj_words[v] = np.frombuffer(bits[v].to_bytes(words * 8, "little"), dtype=np.uint64)

    counts = _kernels.pair_scan_counts(adj_words, n, a, b, samples, seed)
    margins = counts.astype(np.float64) / threshold
    worst_t = int(np.argmin(counts))
    wa, wb = _fallback.sample_pair(seed, worst_t, n, a, b)
    recount = count_edges_between(H, sorted(wa), sorted(wb))
    if recount != int(counts[worst_t]):
        raise AssertionError("kernel count disagrees with direct recount")

    order = sorted(range(n), key=lambda v: (H.degree(v), v))
    structured = []
    for name, sa, sb in (
        ("low_degree_a_first", order[:a], order[a : a + b]),
        ("low_degree_b_first", order[b : a + b], order[:b]),
    ):
        cnt = count_edges_between(H, sorted(sa), sorted(sb))
        structured.append((name, cnt, cnt / threshold))

    all_margins = [float(m) for m in margins] + [m for _, _, m in structured]
    worst_margin = min(all_margins)
    violations = int((margins < 1.0).sum()) + sum(1 for _, _, m in structured if m < 1.0)
    return ScanResult(
        a=a,
        b=b,
        threshold=threshold,
        samples=samples,
        worst_margin=worst_margin,
        worst_pair=(tuple(sorted(wa)), tuple(sorted(wb))),
        violations=violations,
        margins=margins,
        structured=structured,
        flagged=worst_margin < 1.0,
        backend=_kernels.BACKEND,
    )
