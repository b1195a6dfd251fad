"""Command-line interface.

Subcommands: gen, forest, sample, concentration, expander, cycle, oracle
(cycle | forest | seqbound), bench, calibrate.  See README.md for the file
formats (graphs as "n m" + "u v c" lines; forests as "paths k" + vertex rows).
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bench as bench_mod
from .errors import GraphFormatError, RainbowError
from .expander import ExpanderParams, check_expander
from .forest import (
    SearchBudget,
    greedy_rainbow_forest,
    swap_minimize,
)
from .generators import (
    GeneratorSpec,
    generate,
    latin_symmetric,
)
from .graph import read_graph, write_graph
from .oracle import (
    SequenceCheckInput,
    brute_longest_rainbow_cycle,
    brute_min_spanning_forest,
    sequence_bound_sweep,
    verify_sequence_bound,
    verify_sequence_condition,
)
from .pipeline import long_rainbow_cycle
from .rng import derive_seed
from .sampling import (
    SampleParams,
    adversarial_pair_scan,
    check_degree_concentration,
    sample_color_subgraph,
)

KIND_ALIASES = {
    "round_robin": "round_robin_even",
    "round_robin_even": "round_robin_even",
    "circular": "circular_odd",
    "circular_odd": "circular_odd",
    "random": "random_proper",
    "random_proper": "random_proper",
    "latin": "latin_symmetric",
    "latin_symmetric": "latin_symmetric",
}


def _fmt(x: float) -> str:
    return format(x, ".10g")


def write_forest(paths, out: str) -> None:
    with open(out, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"paths {len(paths)}\n")
        for p in paths:
            fh.write(" ".join(str(v) for v in p) + "\n")


def read_forest(path: str) -> list[tuple[int, ...]]:
    rows = [
        ln.strip()
        for ln in Path(path).read_text(encoding="ascii").splitlines()
        if ln.strip() and not ln.startswith("#")
    ]
    if not rows or not rows[0].startswith("paths "):
        raise GraphFormatError("forest file must start with 'paths k'")
    k = int(rows[0].split()[1])
    if len(rows) - 1 != k:
        raise GraphFormatError(f"expected {k} path lines, found {len(rows) - 1}")
    return [tuple(int(v) for v in ln.split()) for ln in rows[1:]]


def cmd_gen(args) -> int:
    kind = KIND_ALIASES[args.kind]
    if kind == "latin_symmetric":
        if not args.square:
            raise SystemExit("gen --kind latin requires --square FILE")
        rows = [
            ln.split()
            for ln in Path(args.square).read_text(encoding="utf-8").splitlines()
            if ln.strip()
        ]
        g = latin_symmetric(rows)
    else:
        g = generate(GeneratorSpec(kind, args.n, extra_colors=args.extra_colors, seed=args.seed))
    write_graph(g, args.out)
    print(f"wrote {args.out}: n={g.n} m={g.num_edges} colors={len(g.colors())}")
    return 0


def cmd_forest(args) -> int:
    g = read_graph(args.infile)
    res = greedy_rainbow_forest(g, args.gamma, args.delta)
    forest = res.forest
    rep = res.report
    print(
        f"greedy: paths={rep.path_count} edges={rep.edge_count} "
        f"targets: paths<={_fmt(rep.paths_target)} ({'ok' if rep.paths_target_met else 'MISS'}) "
        f"edges>={_fmt(rep.edges_target)} ({'ok' if rep.edges_target_met else 'MISS'}) "
        f"uncovered={len(rep.uncovered)}"
    )
    if args.minimize:
        budget = SearchBudget(args.budget_width, args.budget_depth, args.budget_rounds)
        mr = swap_minimize(forest, g, budget)
        forest = mr.forest
        flag = "swap-optimal" if mr.swap_optimal else "budget-swap-optimal"
        print(f"minimize: paths={forest.path_count} ({flag}, visited {mr.states_visited})")
    if args.out:
        write_forest(forest.paths, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_sample(args) -> int:
    g = read_graph(args.infile)
    params = SampleParams(p=args.p, epsilon=0.5, seed=args.seed)
    h = sample_color_subgraph(g, params)
    write_graph(h, args.out)
    print(f"wrote {args.out}: kept {len(h.colors())} of {len(g.colors())} classes, m={h.num_edges}")
    return 0


def cmd_concentration(args) -> int:
    g = read_graph(args.host)
    h = read_graph(args.sub)
    params = SampleParams(p=args.p, epsilon=args.epsilon, seed=args.seed)
    rep = check_degree_concentration(h, g, params)
    lines = ["check,param_a,param_b,observed,threshold,pass"]
    lines.append(
        f"degree_band,{args.seed},{g.n},{_fmt(rep.worst_ratio)},{_fmt(args.epsilon)},{rep.degree_ok}"
    )
    if args.scan_samples > 0:
        a = args.scan_a or math.ceil(math.log2(g.n) / args.p)
        b = args.scan_b or min(math.ceil((math.log2(g.n) / args.p) ** 2), g.n // 3)
        scan = adversarial_pair_scan(
            h, g, a, b, params, samples=args.scan_samples, seed=derive_seed(args.seed, 7)
        )
        lines.append(
            f"pair_scan_min,{a},{b},{_fmt(scan.worst_margin * scan.threshold)},"
            f"{_fmt(scan.threshold)},{not scan.flagged}"
        )
    text = "\n".join(lines) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="ascii", newline="")
        print(f"wrote {args.report}")
    else:
        sys.stdout.write(text)
    return 0 if rep.degree_ok else 1


def cmd_expander(args) -> int:
    h = read_graph(args.infile)
    params = ExpanderParams(a=args.a, b=args.b, mode=args.mode, samples=args.samples, seed=args.seed)
    v = check_expander(h, params)
    print(f"verdict: {v.status}")
    if v.witness:
        print(f"witness: {v.witness}")
    return 0 if v.status == "holds" else (2 if v.status == "refuted" else 1)


def cmd_cycle(args) -> int:
    g = read_graph(args.infile)
    overrides = {}
    if args.delta is not None:
        overrides["delta"] = args.delta
    if args.a is not None:
        overrides["a"] = args.a
    if args.b is not None:
        overrides["b"] = args.b
    run = long_rainbow_cycle(g, args.C, args.seed, floor=args.floor, **overrides)
    m = run.metrics
    header = "n,seed,C,p,a,b,delta,gamma,forest_paths,rounds,removed_classes,p1_len,cycle_len,deficit,valid"
    row = ",".join(
        [
            str(m.n), str(m.seed), _fmt(m.C), _fmt(m.p), str(m.a), str(m.b),
            _fmt(m.delta), _fmt(m.gamma), str(m.forest_paths), str(m.rounds),
            str(m.removed_classes), str(m.p1_len), str(m.cycle_len),
            str(m.deficit), str(m.valid),
        ]
    )
    if args.metrics:
        Path(args.metrics).write_text(header + "\n" + row + "\n", encoding="ascii", newline="")
        print(f"wrote {args.metrics}")
    print(f"cycle length {m.cycle_len} (deficit {m.deficit}) in {m.rounds} rounds; valid={m.valid}")
    if args.out:
        write_forest([run.cycle], args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_oracle(args) -> int:
    if args.what == "cycle":
        g = read_graph(args.infile)
        length, witness = brute_longest_rainbow_cycle(g, cap=args.cap)
        print(f"longest rainbow cycle: {length}")
        if witness:
            print(" ".join(str(v) for v in witness))
    elif args.what == "forest":
        g = read_graph(args.infile)
        k, witness = brute_min_spanning_forest(g, cap=args.cap)
        print(f"minimum spanning rainbow path forest: {k} paths")
        for p in witness:
            print(" ".join(str(v) for v in p))
    else:  # seqbound
        c = Fraction(args.c)
        seq = tuple(int(v) for v in args.seq.split(","))
        inp = SequenceCheckInput(c=c, m=args.m, seq=seq)
        if not verify_sequence_condition(inp):
            print("condition: FAIL (bound not claimed)")
            return 1
        chk = verify_sequence_bound(inp)
        print(
            f"condition: ok; k={len(seq)} bound in [{_fmt(float(chk.bound_low))}, "
            f"{_fmt(float(chk.bound_high))}] holds={chk.holds}"
        )
        if args.sweep_limit:
            stats = sequence_bound_sweep(args.sweep_limit, c, args.m)
            print(
                f"sweep n_k<={stats.limit}: sequences={stats.total_sequences} "
                f"satisfying={stats.condition_satisfied} violations={stats.bound_violations} "
                f"[{stats.backend}]"
            )
            return 0 if stats.bound_violations == 0 else 1
    return 0


def cmd_bench(args) -> int:
    if args.replay:
        rec = bench_mod.replay_record(args.replay)
        print(",".join(rec.row()))
        return 0 if rec.error == "" else 1
    cfg = bench_mod.load_config(args.config)
    records = bench_mod.sweep(cfg)
    bench_mod.write_csv(records, args.out, include_runtime=args.include_runtime)
    errors = sum(1 for r in records if r.error)
    print(f"wrote {args.out}: {len(records)} records, {errors} errors")
    return 0 if errors == 0 else 1


def cmd_calibrate(args) -> int:
    data = bench_mod.calibrate(fast=args.fast)
    bench_mod.save_calibration(data, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rbc", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a properly edge-colored complete graph")
    p.add_argument("--kind", choices=sorted(KIND_ALIASES), required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extra-colors", type=int, default=1)
    p.add_argument("--square", help="Latin square file (n rows of n symbols)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("forest", help="greedy rainbow path forest, optionally swap-minimized")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--budget-width", type=int, default=10000)
    p.add_argument("--budget-depth", type=int, default=8)
    p.add_argument("--budget-rounds", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(func=cmd_forest)

    p = sub.add_parser("sample", help="random color-class subgraph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("concentration", help="degree-band and pair-density report")
    p.add_argument("--g", dest="host", required=True)
    p.add_argument("--h", dest="sub", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scan-samples", type=int, default=0)
    p.add_argument("--scan-a", type=int, default=0)
    p.add_argument("--scan-b", type=int, default=0)
    p.add_argument("--report")
    p.set_defaults(func=cmd_concentration)

    p = sub.add_parser("expander", help="minimum-degree + sparse-pair verdict")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_expander)

    p = sub.add_parser("cycle", help="long rainbow cycle pipeline")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--floor", type=int, default=64)
    p.add_argument("--delta", type=float)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--metrics")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("oracle", help="brute-force references")
    osub = p.add_subparsers(dest="what", required=True)
    oc = osub.add_parser("cycle")
    oc.add_argument("--in", dest="infile", required=True)
    oc.add_argument("--cap", type=int, default=11)
    oc.set_defaults(func=cmd_oracle)
    of = osub.add_parser("forest")
    of.add_argument("--in", dest="infile", required=True)
    of.add_argument("--cap", type=int, default=9)
    of.set_defaults(func=cmd_oracle)
    os_ = osub.add_parser("seqbound")
    os_.add_argument("--c", required=True, help="rational like 1/6")
    os_.add_argument("--m", type=int, default=1)
    os_.add_argument("--seq", required=True, help="comma-separated increasing integers")
    os_.add_argument("--sweep-limit", type=int, default=0)
    os_.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="experiment sweep from a config file")
    p.add_argument("--config")
    p.add_argument("--out", default="results.csv")
    p.add_argument("--include-runtime", action="store_true")
    p.add_argument("--replay", help="re-run one record from its invocation string")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("calibrate", help="re-derive frozen regression thresholds")
    p.add_argument("--out", default=str(bench_mod.CALIBRATION_PATH))
    p.add_argument("--fast", action="store_true")
    p.set_defaults(func=cmd_calibrate)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RainbowError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
