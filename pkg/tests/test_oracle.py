import itertools
from fractions import Fraction

import pytest

from rainbowcycles.errors import ConditionNotVerified, InstanceTooLarge
from rainbowcycles.generators import rainbow_complete, random_proper
from rainbowcycles.graph import build_colored_graph
from rainbowcycles.oracle import (
    SequenceCheckInput,
    bound_floor_table,
    brute_longest_rainbow_cycle,
    brute_longest_rainbow_path,
    brute_min_spanning_forest,
    build_optimal_chain,
    check_chain_bounds,
    first_violating_pair,
    log_base_r_bracket,
    sequence_bound_sweep,
    swap_closure,
    verify_forest,
    verify_rainbow_cycle,
    verify_sequence_bound,
    verify_sequence_condition,
)

C16 = Fraction(1, 6)


# -- validators ---------------------------------------------------------------


def test_validator_accepts_triangle(k4_factorized):
    ok, why = verify_rainbow_cycle(k4_factorized, (0, 1, 2))
    assert ok, why


def test_validator_rejects_color_repeat(k4_factorized):
    ok, why = verify_rainbow_cycle(k4_factorized, (0, 1, 3, 2))
    assert not ok and "color" in why


def test_validator_rejects_repeats_and_nonedges(k4_factorized):
    assert not verify_rainbow_cycle(k4_factorized, (0, 1, 0))[0]
    assert not verify_rainbow_cycle(k4_factorized, (0, 1))[0]
    g = build_colored_graph(4, [(0, 1, 0), (1, 2, 1), (2, 3, 2)])
    assert not verify_rainbow_cycle(g, (0, 1, 2, 3))[0]  # missing wrap edge


def test_forest_validator(k4_factorized):
    assert verify_forest(k4_factorized, [(1, 0, 2), (3,)])[0]
    assert not verify_forest(k4_factorized, [(0, 1), (1, 2)])[0]
    assert not verify_forest(k4_factorized, [(0, 1, 2, 3)])[0]  # repeats color 0


# -- brute-force searches -------------------------------------------------


def test_longest_cycle_k4_factorization_is_triangle(k4_factorized):
    length, witness = brute_longest_rainbow_cycle(k4_factorized)
    assert length == 3
    assert verify_rainbow_cycle(k4_factorized, witness)[0]


def test_longest_cycle_rainbow_k5_is_hamilton():
    g = rainbow_complete(5)
    length, witness = brute_longest_rainbow_cycle(g)
    assert length == 5
    assert verify_rainbow_cycle(g, witness)[0]


def test_longest_cycle_edgeless_none():
    g = build_colored_graph(4, [])
    assert brute_longest_rainbow_cycle(g) == (0, None)


def test_longest_cycle_cap():
    with pytest.raises(InstanceTooLarge):
        brute_longest_rainbow_cycle(rainbow_complete(12))


def test_longest_path_trivia(rainbow_triangle):
    assert brute_longest_rainbow_path(rainbow_triangle)[0] == 3
    g = build_colored_graph(2, [(0, 1, 0)])
    assert brute_longest_rainbow_path(g)[0] == 2


def test_longest_path_k4_factorization(k4_factorized):
    # no rainbow Hamilton path exists in this coloring (checked exhaustively
    # by the oracle itself; the distinct-color transversals all fail)
    length, witness = brute_longest_rainbow_path(k4_factorized)
    assert length == 3
    assert verify_forest(k4_factorized, [witness])[0]


def test_min_forest_trivia():
    assert brute_min_spanning_forest(rainbow_complete(6))[0] == 1
    g = build_colored_graph(4, [])
    k, witness = brute_min_spanning_forest(g)
    assert k == 4 and witness == ((0,), (1,), (2,), (3,))


def test_min_forest_k4_factorization(k4_factorized):
    k, witness = brute_min_spanning_forest(k4_factorized)
    assert k == 2
    assert verify_forest(k4_factorized, witness)[0]
    assert sum(len(p) for p in witness) == 4


def _naive_longest_rainbow_cycle(g):
    """From-scratch reference: try every vertex subset in every cyclic order."""
    best = 0
    for r in range(3, g.n + 1):
        for verts in itertools.combinations(range(g.n), r):
            for perm in itertools.permutations(verts[1:]):
                cyc = (verts[0],) + perm
                colors = set()
                ok = True
                for i in range(r):
                    u, v = cyc[i], cyc[(i + 1) % r]
                    if not g.has_edge(u, v):
                        ok = False
                        break
                    c = g.color_of(u, v)
                    if c in colors:
                        ok = False
                        break
                    colors.add(c)
                if ok:
                    best = max(best, r)
                    break
            if best == r:
                break
    return best


def _naive_longest_rainbow_path(g):
    best = 1 if g.n else 0
    for r in range(2, g.n + 1):
        for verts in itertools.combinations(range(g.n), r):
            for perm in itertools.permutations(verts):
                colors = set()
                ok = True
                for i in range(r - 1):
                    u, v = perm[i], perm[i + 1]
                    if not g.has_edge(u, v):
                        ok = False
                        break
                    c = g.color_of(u, v)
                    if c in colors:
                        ok = False
                        break
                    colors.add(c)
                if ok:
                    best = max(best, r)
                    break
            if best == r:
                break
    return best


@pytest.mark.parametrize("n,seed", [(5, 0), (5, 1), (6, 2), (6, 3)])
def test_longest_cycle_matches_naive_enumeration(n, seed):
    g = random_proper(n, extra_colors=1, seed=seed)
    assert brute_longest_rainbow_cycle(g)[0] == _naive_longest_rainbow_cycle(g)


@pytest.mark.parametrize("n,seed", [(5, 0), (5, 4), (6, 5)])
def test_longest_path_matches_naive_enumeration(n, seed):
    g = random_proper(n, extra_colors=1, seed=seed)
    assert brute_longest_rainbow_path(g)[0] == _naive_longest_rainbow_path(g)


def test_longest_cycle_naive_agreement_on_k4(k4_factorized):
    assert _naive_longest_rainbow_cycle(k4_factorized) == 3


def test_min_forest_brute_matches_exhaustive_subsets():
    """Cross-check the path-by-path search against a from-scratch enumeration
    over edge subsets on a couple of tiny instances."""
    for seed in (0, 1):
        g = random_proper(5, extra_colors=2, seed=seed)
        edges = list(g.edges())
        best = g.n
        for r in range(len(edges) + 1):
            for combo in itertools.combinations(edges, r):
                deg = {}
                cols = set()
                ok = True
                for u, v, c in combo:
                    if c in cols:
                        ok = False
                        break
                    cols.add(c)
                    deg[u] = deg.get(u, 0) + 1
                    deg[v] = deg.get(v, 0) + 1
                    if deg[u] > 2 or deg[v] > 2:
                        ok = False
                        break
                if not ok:
                    continue
                if not verify_forest_from_edges(g, combo):
                    continue
                best = min(best, g.n - len(combo))
        assert brute_min_spanning_forest(g)[0] == best


def verify_forest_from_edges(g, combo):
    """Acyclicity via union-find; degree and rainbow already pre-checked."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in combo:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


# -- swap closure -----------------------------------------------------------


def test_closure_of_isolated_forest(k4_factorized):
    g = build_colored_graph(4, [(0, 1, 0)])
    stats = swap_closure([(0, 1), (2,), (3,)], g)
    assert stats.forests_visited == 1
    assert stats.min_p == 3
    assert stats.associated_colors == frozenset()
    assert stats.endpoint_union == frozenset({0, 1, 2, 3})


def test_closure_rainbow_k4_reaches_hamilton():
    g = rainbow_complete(4)
    stats = swap_closure([(v,) for v in range(4)], g)
    assert stats.min_p == 1
    assert not stats.truncated


def test_closure_cap_truncates():
    g = rainbow_complete(6)
    stats = swap_closure([(v,) for v in range(6)], g, cap=5)
    assert stats.truncated
    assert stats.forests_visited >= 5


def test_color_count_bounds_on_swap_optimal_forests():
    """On swap-optimal forests: closure endpoint and color counts obey
    n_j/2 - j <= |C_j| <= n_j - j."""
    checked = 0
    for seed in range(8):
        g = random_proper(6, extra_colors=2, seed=seed)
        k, fk = brute_min_spanning_forest(g)
        stats = swap_closure(fk, g)
        assert stats.min_p == k  # optimal, hence swap-optimal
        nj, cj = len(stats.endpoint_union), len(stats.associated_colors)
        assert nj / 2 - k <= cj <= nj - k
        checked += 1
    assert checked == 8


# -- chain construction -------------------------------------------------------


def test_chain_k4_factorization(k4_factorized):
    chain = build_optimal_chain(k4_factorized)
    assert chain.k == 2
    assert sorted(chain.levels) == [1, 2]
    assert chain.levels[1].endpoint_union <= chain.levels[2].endpoint_union
    rep = check_chain_bounds(k4_factorized, chain)
    assert rep.all_hold(), rep
    assert rep.degree_lower_bounds  # k = 2 makes the second degree bound non-vacuous
    assert rep.edge_bounds_vacuous  # needs k >= 3


def test_chain_random_instances_bounds_hold():
    for seed in (0, 3, 5):
        g = random_proper(6, extra_colors=1, seed=seed)
        chain = build_optimal_chain(g)
        rep = check_chain_bounds(g, chain)
        assert rep.all_hold(), (seed, rep)


# -- sequence condition and bound ---------------------------------------------


def test_sequence_condition_two_terms_spec_arithmetic():
    # pair (1, 2): lhs = 1, rhs = ((2-1)/1)*((7/6)*1 - (2*2 - 1)) = 7/6 - 3 < 0
    inp = SequenceCheckInput(C16, 1, (1, 2))
    assert verify_sequence_condition(inp)


def test_sequence_condition_violation_via_brute_search():
    """Search small four-term 'cliff' families for a violating pair, then
    confirm the checker flags exactly such sequences."""
    found = None
    for base in range(100, 1500, 50):
        for gap in range(10, 120, 10):
            seq = (base - 1, base, base + gap - 1, base + gap)
            inp = SequenceCheckInput(C16, 1, seq)
            if not verify_sequence_condition(inp):
                found = seq
                break
        if found:
            break
    assert found is not None
    pair = first_violating_pair(SequenceCheckInput(C16, 1, found))
    assert pair is not None
    j, ell = pair
    # recompute the violated inequality independently with Fractions
    n0 = [0] + list(found)
    lhs = Fraction(n0[j] - n0[j - 1])
    rhs = Fraction(n0[ell] - n0[j], n0[j]) * (
        (1 + C16) * n0[j] - (2 * n0[ell] - n0[ell - 1])
    )
    assert lhs < rhs


def test_known_violating_sequence():
    inp = SequenceCheckInput(C16, 1, (999, 1000, 1079, 1080))
    assert not verify_sequence_condition(inp)
    with pytest.raises(ConditionNotVerified):
        verify_sequence_bound(inp)


def test_sequence_bound_singleton():
    chk = verify_sequence_bound(SequenceCheckInput(C16, 0, (1,)))
    assert chk.holds  # k = 1 <= m + 1


def test_sequence_bound_r_19_18():
    inp = SequenceCheckInput(C16, 1, (1, 3, 4, 7))
    assert inp.r == Fraction(19, 18)
    chk = verify_sequence_bound(inp)
    assert chk.holds and not chk.violation_certain


def test_log_bracket_exact():
    import math

    r = Fraction(19, 18)
    for x in (2, 7, 30, 1000):
        lo, hi = log_base_r_bracket(r, x)
        true = math.log(x) / math.log(19 / 18)
        assert float(lo) <= true <= float(hi)
        assert hi - lo <= Fraction(1, 16)
    assert log_base_r_bracket(r, 1) == (0, 0)


def test_bound_floor_table_consistent():
    import math

    table = bound_floor_table(30, C16, 1)
    for x in (1, 2, 17, 30):
        if x == 1:
            assert table[x] == 2  # log term vanishes: bound is m + 1
            continue
        log_approx = math.log(x) / math.log(19 / 18)
        approx = log_approx**2 + 2 * log_approx + 2
        assert abs(table[x] - approx) <= log_approx / 2 + 2


def test_sweep_small_limits_match_direct_enumeration():
    limit = 10
    stats = sequence_bound_sweep(limit, C16, 1)
    total = sat = 0
    for r in range(1, limit + 1):
        for seq in itertools.combinations(range(1, limit + 1), r):
            total += 1
            if verify_sequence_condition(SequenceCheckInput(C16, 1, seq)):
                sat += 1
    assert stats.total_sequences == total == 2**limit - 1
    assert stats.condition_satisfied == sat
    assert stats.bound_violations == 0


def test_oracle_dominates_forest_module():
    """The exact minimum is a lower bound for any swap-minimized count."""
    from rainbowcycles.forest import SearchBudget, greedy_rainbow_forest, spanning_completion, swap_minimize

    for seed in range(4):
        g = random_proper(7, extra_colors=2, seed=seed)
        start = spanning_completion(greedy_rainbow_forest(g, 0.5, 0.5).forest, g)
        res = swap_minimize(start, g, SearchBudget(max_width=200, max_depth=3, max_rounds=8))
        exact, _ = brute_min_spanning_forest(g)
        assert exact <= res.forest.path_count
