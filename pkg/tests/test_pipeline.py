import math
import warnings

import numpy as np
import pytest

from rainbowcycles.errors import (
    BelowFloor,
    DegenerateP,
    NoClosure,
    NoExtensionFound,
    PipelinePrecondition,
)
from rainbowcycles.forest import PathForest
from rainbowcycles.generators import round_robin_even
from rainbowcycles.graph import build_colored_graph
from rainbowcycles.oracle import verify_rainbow_cycle
from rainbowcycles.pipeline import (
    PipelineParams,
    bundle_from_parts,
    close_cycle,
    extend_to_long_path,
    long_rainbow_cycle,
    path_builder_step,
    split_four,
)


def cg(n, edges):
    return build_colored_graph(n, edges)


def tiny_params(n, a=1, b=2):
    return PipelineParams(
        n=n, C=0.5, seed=0, p=0.5, a=a, b=b, delta=0.05, gamma=0.1, iter_cap=2 * n
    )


# -- split ---------------------------------------------------------------------


def test_split_partitions_colors_and_edges():
    host = round_robin_even(64)
    bundle = split_four(host, 1.2, seed=1)
    parts = [bundle.G, bundle.H1, bundle.H2, bundle.H3]
    color_sets = [set(p.colors()) for p in parts]
    union = set().union(*color_sets)
    assert union == set(host.colors())
    assert sum(len(cs) for cs in color_sets) == len(union)
    assert sum(p.num_edges for p in parts) == host.num_edges == 64 * 63 // 2


def test_split_deterministic():
    host = round_robin_even(32)
    b1 = split_four(host, 0.8, seed=9)
    b2 = split_four(host, 0.8, seed=9)
    for g1, g2 in [(b1.G, b2.G), (b1.H1, b2.H1), (b1.H2, b2.H2), (b1.H3, b2.H3)]:
        assert np.array_equal(g1.color_matrix(), g2.color_matrix())


def test_split_p_near_one_degenerates_gracefully():
    host = round_robin_even(16)
    bundle = split_four(host, 0.99, seed=0)  # p ~ 0.99: H1 grabs nearly all
    assert bundle.params.p < 1
    parts = [bundle.G, bundle.H1, bundle.H2, bundle.H3]
    assert sum(p.num_edges for p in parts) == host.num_edges


def test_split_rejects_p_at_least_one():
    host = round_robin_even(64)
    with pytest.raises(DegenerateP):
        split_four(host, 2.0, seed=0)  # p = 2*6/8 = 1.5


def test_degree_reports_present():
    host = round_robin_even(64)
    bundle = split_four(host, 0.6, seed=4)
    assert [r.name for r in bundle.degree_reports] == ["H1", "H2", "H3"]


# -- crafted extension instances ---------------------------------------------


def make_level0_bundle():
    n = 5
    g_e = [(0, 1, 0), (3, 4, 1)]
    h3_e = [(0, 3, 12)]
    host = cg(n, g_e + h3_e)
    return (
        bundle_from_parts(host, cg(n, g_e), cg(n, []), cg(n, []), cg(n, h3_e), tiny_params(n)),
        PathForest(host, [(0, 1), (3, 4)]),
    )


def test_level0_direct_extension():
    bundle, forest = make_level0_bundle()
    step = path_builder_step(bundle, forest)
    assert step.level == 0
    assert step.helper_edges == {3: (0, 3)}
    assert step.p1_after == 4
    assert step.donor_after == 0
    assert step.new_forest.path_count == 1


def test_level1_rotation_extension():
    n = 6
    g_e = [(0, 1, 0), (1, 2, 1), (2, 3, 2), (4, 5, 3)]
    h1_e = [(0, 2, 10)]
    h3_e = [(1, 4, 12)]
    host = cg(n, g_e + h1_e + h3_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, h1_e), cg(n, []), cg(n, h3_e), tiny_params(n)
    )
    forest = PathForest(host, [(0, 1, 2, 3), (4, 5)])
    step = path_builder_step(bundle, forest)
    assert step.level == 1
    assert step.helper_edges == {1: (0, 2), 3: (1, 4)}
    assert step.p1_after == 6
    # rotated path 1,0,2,3 spliced with reversed donor 5,4
    assert step.ordered_paths[0] == (5, 4, 1, 0, 2, 3)


def test_level1_absorb_extension():
    n = 5
    g_e = [(0, 1, 0), (3, 4, 1)]
    h1_e = [(0, 2, 10)]
    h3_e = [(2, 3, 12)]
    host = cg(n, g_e + h1_e + h3_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, h1_e), cg(n, []), cg(n, h3_e), tiny_params(n)
    )
    forest = PathForest(host, [(0, 1), (3, 4)])
    step = path_builder_step(bundle, forest)
    assert step.level == 1
    assert step.ordered_paths[0] == (4, 3, 2, 0, 1)  # absorbed the free vertex 2
    assert step.new_forest.covered == frozenset(range(5))


def test_level2_two_helper_extension():
    n = 8
    g_e = [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3), (4, 5, 4), (6, 7, 5)]
    h1_e = [(0, 4, 10)]
    h2_e = [(1, 3, 11)]
    h3_e = [(2, 6, 12)]
    host = cg(n, g_e + h1_e + h2_e + h3_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, h1_e), cg(n, h2_e), cg(n, h3_e), tiny_params(n)
    )
    forest = PathForest(host, [(0, 1, 2, 3, 4, 5), (6, 7)])
    step = path_builder_step(bundle, forest)
    assert step.level == 2
    assert step.helper_edges == {1: (0, 4), 2: (1, 3), 3: (2, 6)}
    assert step.ordered_paths[0] == (7, 6, 2, 3, 1, 0, 4, 5)
    assert step.donor_after == 0


def test_level2_hit_beyond_chord():
    # chord at position 2, second helper lands past it: endpoint seq[kz-1]
    n = 8
    g_e = [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3), (4, 5, 4), (6, 7, 5)]
    h1_e = [(0, 2, 10)]
    h2_e = [(1, 4, 11)]
    h3_e = [(3, 6, 12)]
    host = cg(n, g_e + h1_e + h2_e + h3_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, h1_e), cg(n, h2_e), cg(n, h3_e), tiny_params(n)
    )
    forest = PathForest(host, [(0, 1, 2, 3, 4, 5), (6, 7)])
    step = path_builder_step(bundle, forest)
    assert step.level == 2
    assert step.helper_edges == {1: (0, 2), 2: (1, 4), 3: (3, 6)}
    assert step.ordered_paths[0] == (7, 6, 3, 2, 0, 1, 4, 5)


def test_no_extension_raises_with_diagnostics():
    n = 5
    g_e = [(0, 1, 0), (3, 4, 1)]
    host = cg(n, g_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, []), cg(n, []), cg(n, []), tiny_params(n)
    )
    forest = PathForest(host, [(0, 1), (3, 4)])
    with pytest.raises(NoExtensionFound) as err:
        path_builder_step(bundle, forest)
    assert err.value.diagnostics["p1_len"] == 2
    assert err.value.diagnostics["t_size"] == 2


def test_step_precondition_p1_too_long():
    n = 6
    g_e = [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3)]
    host = cg(n, g_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, []), cg(n, []), cg(n, []), tiny_params(n, a=2)
    )
    forest = PathForest(host, [(0, 1, 2, 3, 4)])
    # |P1| = 5 > n - a - |U| = 6 - 2 - 1
    with pytest.raises(PipelinePrecondition):
        path_builder_step(bundle, forest)


def test_donor_midpoint_split_inequality():
    n = 11
    p1 = (0, 1, 2, 3, 4, 5)
    donor = (6, 7, 8, 9, 10)
    g_e = [(p1[i], p1[i + 1], i) for i in range(5)] + [
        (donor[i], donor[i + 1], 5 + i) for i in range(4)
    ]
    h3_e = [(0, 8, 20)]  # hit the exact midpoint of the 5-vertex donor
    host = cg(n, g_e + h3_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, []), cg(n, []), cg(n, h3_e), tiny_params(n)
    )
    forest = PathForest(host, [p1, donor])
    step = path_builder_step(bundle, forest)
    assert step.donor_before == 5
    assert step.donor_after == 2  # strictly less than 5/2
    assert step.donor_after < step.donor_before / 2
    assert step.p1_after >= step.p1_before + step.donor_before - step.donor_after


# -- extension loop ------------------------------------------------------------


def test_extend_loop_immediate_target():
    bundle, forest = make_level0_bundle()
    params = tiny_params(5)
    # target = n - 4*delta*n - a = 5 - 1 - 1 = 3; start P1 already has 2 < 3,
    # so one round runs and reaches 4 >= 3
    res = extend_to_long_path(bundle, forest)
    assert res.reason in ("target", "no_donors")
    assert len(res.p1) >= 3
    assert len(res.rounds) == 1


def test_extend_loop_removes_helper_classes():
    bundle, forest = make_level0_bundle()
    res = extend_to_long_path(bundle, forest)
    assert bundle.removal_log, "used helper classes must be logged"
    rnd, j, color = bundle.removal_log[0]
    assert (j, color) == (3, 12)


def test_extend_donor_use_counts_bounded():
    host = round_robin_even(64)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = long_rainbow_cycle(host, 0.15, seed=3, delta=0.02)
    cap = math.ceil(math.log2(64))
    assert all(v <= cap for v in run.extend.donor_use_counts.values())


def test_extend_p1_strictly_increases():
    host = round_robin_even(64)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = long_rainbow_cycle(host, 0.15, seed=1, delta=0.02)
    lens = [r.p1_before for r in run.extend.rounds] + [
        run.extend.rounds[-1].p1_after if run.extend.rounds else len(run.extend.p1)
    ]
    assert all(a < b for a, b in zip(lens, lens[1:]))


# -- cycle closing -------------------------------------------------------------


def test_close_direct_picks_longest():
    n = 6
    g_e = [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3), (4, 5, 4)]
    h1_e = [(1, 4, 10), (0, 5, 11)]
    host = cg(n, g_e + h1_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, h1_e), cg(n, []), cg(n, []), tiny_params(n, a=2)
    )
    res = close_cycle(bundle, (0, 1, 2, 3, 4, 5))
    assert res.mode == "direct"
    assert len(res.cycle) == 6
    assert verify_rainbow_cycle(host, res.cycle)[0]


def test_close_indirect_reroute():
    n = 6
    g_e = [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3), (4, 5, 4)]
    h1_e = [(0, 3, 10)]
    h2_e = [(2, 4, 11)]
    host = cg(n, g_e + h1_e + h2_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, h1_e), cg(n, h2_e), cg(n, []), tiny_params(n, a=2)
    )
    res = close_cycle(bundle, (0, 1, 2, 3, 4, 5))
    assert res.mode == "indirect"
    ok, why = verify_rainbow_cycle(host, res.cycle)
    assert ok, why
    assert len(res.cycle) >= 6 - 2 * 2  # >= |P1| - 2a


def test_close_requires_long_path():
    bundle, _ = make_level0_bundle()
    with pytest.raises(PipelinePrecondition):
        close_cycle(bundle, (0, 1))


def test_close_no_route_raises():
    n = 6
    g_e = [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 3), (4, 5, 4)]
    host = cg(n, g_e)
    bundle = bundle_from_parts(
        host, cg(n, g_e), cg(n, []), cg(n, []), cg(n, []), tiny_params(n, a=2)
    )
    with pytest.raises(NoClosure):
        close_cycle(bundle, (0, 1, 2, 3, 4, 5))


def test_extension_step_fuzz_preserves_all_invariants():
    """Randomized bundles: whenever a step succeeds, the new forest passes the
    independent validator, the first path grows by the donated amount, and the
    donor remnant is below half."""
    from rainbowcycles.oracle import verify_forest
    from rainbowcycles.rng import SplitMix64
    from rainbowcycles.sampling import SampleParams, sample_color_subgraph
    from rainbowcycles.graph import subgraph_by_colors
    from rainbowcycles.forest import greedy_rainbow_forest

    import warnings as w

    successes = 0
    for seed in range(40):
        rng = SplitMix64(seed)
        n = 10 + rng.randbelow(8)
        if n % 2:
            n += 1
        host = round_robin_even(n)
        # random split via the sampling primitive, remainder becomes G
        rest = host
        parts = []
        for j in range(3):
            h = sample_color_subgraph(rest, SampleParams(p=0.3, epsilon=0.5, seed=seed * 7 + j))
            parts.append(h)
            rest = subgraph_by_colors(rest, [c for c in rest.colors() if c not in set(h.colors())])
        params = PipelineParams(
            n=n, C=0.5, seed=seed, p=0.3, a=1, b=max(1, n // 4), delta=0.05,
            gamma=0.2, iter_cap=2 * n,
        )
        bundle = bundle_from_parts(host, rest, parts[0], parts[1], parts[2], params)
        with w.catch_warnings():
            w.simplefilter("ignore")
            forest = greedy_rainbow_forest(rest, 0.4, 0.4).forest
        if forest.path_count < 2:
            continue
        paths = sorted(forest.paths, key=lambda p: (-len(p), p))
        u = n - sum(len(p) for p in paths)
        if len(paths[0]) > n - params.a - u:
            continue
        try:
            step = path_builder_step(bundle, PathForest(host, paths))
        except NoExtensionFound:
            continue
        successes += 1
        ok, why = verify_forest(host, step.new_forest.paths)
        assert ok, why
        assert step.p1_after >= step.p1_before + step.donor_before - step.donor_after
        assert step.donor_after < step.donor_before / 2
        assert set(step.helper_edges) == set(step.removed_colors)
        for j, (eu, ev) in step.helper_edges.items():
            assert bundle.helper(j).color_of(eu, ev) == step.removed_colors[j]
    assert successes >= 10  # the fuzz must actually exercise the step


# -- full pipeline ---------------------------------------------------------


def test_pipeline_floor_guard():
    host = round_robin_even(4)
    with pytest.raises(BelowFloor):
        long_rainbow_cycle(host, 0.3, seed=0)


def test_pipeline_k64_valid_cycles():
    host = round_robin_even(64)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for seed in range(5):
            run = long_rainbow_cycle(host, 0.15, seed=seed, delta=0.02)
            ok, why = verify_rainbow_cycle(host, run.cycle)
            assert ok, why
            assert run.metrics.deficit == 64 - run.metrics.cycle_len
            assert run.metrics.cycle_len >= 3


def test_pipeline_forest_rainbow_after_every_round():
    host = round_robin_even(64)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = long_rainbow_cycle(host, 0.2, seed=5, delta=0.02)
    # final forest re-validates against the host
    from rainbowcycles.oracle import verify_forest

    ok, why = verify_forest(host, run.extend.forest.paths)
    assert ok, why
