"""``hlc`` command line.

Exit codes: 0 success, 1 usage or I/O error, 2 engine failure. ``verify``
exits 1 on an improper coloring.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .baseline import alon_color
from .bench import Family, bench
from .engine import Engine, EngineFailed, debug_from_env, query_order, run_complete
from .hypergraph import (
    HypergraphFormatError,
    InfeasibleParameters,
    generate_bounded_degree,
    read_hypergraph,
    serialize,
    write_hypergraph,
)
from .params import Params, params_report, prob_bounds
from .randomness import BitStream, ColorTape, color_char
from .resample import conservative_resample, mt_resample
from .stats import RunStats
from .structures import is_alpha_bad
from .verify import format_coloring, is_proper_coloring, read_coloring
from .witness import event_prob_bound

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _params(h, args) -> Params:
    kw = {}
    if getattr(args, "comp_bound", None) is not None:
        kw["comp_bound"] = args.comp_bound
    if getattr(args, "trial_budget", None) is not None:
        kw["trial_budget"] = args.trial_budget
    return Params.for_hypergraph(h, args.alpha, **kw)


def cmd_gen(args) -> int:
    h = generate_bounded_degree(args.n, args.k, args.d, args.seed)
    comments = [f"generate_bounded_degree n={args.n} k={args.k} d={args.d} seed={args.seed}"]
    if args.out in (None, "-"):
        sys.stdout.write(serialize(h, comments))
    else:
        write_hypergraph(h, args.out, comments)
    return EXIT_OK


def _standalone(h, tape, args) -> tuple[list[int], RunStats]:
    params = _params(h, args)
    max_steps = args.max_steps if args.max_steps is not None else 100 * max(h.m, 1)
    t0 = time.perf_counter()
    if args.algo == "mt":
        res = mt_resample(h, tape.initial_coloring(), max_steps, BitStream(tape, 0))
        bits = h.n + res.bits_used
    else:
        res = conservative_resample(h, args.alpha, tape, max_steps)
        bits = h.n + res.bits_used
    total = time.perf_counter() - t0
    coloring = [res.coloring[v] for v in range(h.n)]
    failure = None if res.success else {"kind": "StepBudgetExhausted", "vertex": None,
                                         "component_index": None, "detail": f"{max_steps} steps"}
    stats = RunStats(
        n=h.n, m=h.m, k=h.k, delta=h.delta, alpha=args.alpha, seed=tape.seed,
        comp_bound=params.comp_bound, trial_budget=params.trial_budget, algo=args.algo,
        success=res.success, failure=failure,
        num_bad_edges=sum(1 for f in range(h.m) if is_alpha_bad(h, tape, args.alpha, f)),
        resample_steps_total=res.steps_used, random_bits_consumed=bits,
        timing={"p50_us": 0.0, "p90_us": 0.0, "p99_us": 0.0, "total_s": total},
    )
    return coloring, stats


def cmd_color(args) -> int:
    h = read_hypergraph(args.input)
    tape = ColorTape(args.seed, h.n)
    debug = args.debug or debug_from_env()
    if args.algo == "lca":
        res = run_complete(h, tape, _params(h, args), query_order(h.n, args.seed, args.order), debug)
        coloring, stats = res.coloring, res.stats
        if res.engine.violations:
            for msg in res.engine.violations:
                print(f"invariant violation: {msg}", file=sys.stderr)
    elif args.algo == "alon":
        ares = alon_color(h, tape, _params(h, args))
        coloring, stats = (ares.coloring if ares.success else None), ares.stats
    else:
        coloring, stats = _standalone(h, tape, args)
        if not stats.success:
            coloring = None
    if args.stats:
        _write_text(args.stats, stats.to_json() + "\n")
    if coloring is None:
        print(f"FAIL {stats.failure['kind']}", file=sys.stderr)
        return EXIT_FAILED
    _write_text(args.out, format_coloring(coloring))
    return EXIT_OK


def cmd_query(args) -> int:
    h = read_hypergraph(args.input)
    eng = Engine(h, ColorTape(args.seed, h.n), _params(h, args), args.debug or debug_from_env())
    try:
        vertices = [int(x) for x in args.vertices.split(",") if x.strip()]
    except ValueError:
        print("--vertices must be a comma-separated list of integers", file=sys.stderr)
        return EXIT_USAGE
    if any(not 0 <= v < h.n for v in vertices):
        print(f"vertex ids must lie in [0, {h.n})", file=sys.stderr)
        return EXIT_USAGE
    status = EXIT_OK
    for v in vertices:
        try:
            print(f"{v} {color_char(eng.query(v))}")
        except EngineFailed as exc:
            print(f"FAIL {exc.record.kind.value}")
            status = EXIT_FAILED
    return status


def cmd_verify(args) -> int:
    h = read_hypergraph(args.input)
    coloring = read_coloring(Path(args.coloring).read_text(encoding="utf-8"), h.n)
    ok, bad = is_proper_coloring(h, coloring)
    if ok:
        print("proper")
        return EXIT_OK
    print(f"improper: {len(bad)} monochromatic edge(s)")
    for f in bad:
        print(f"edge {f}: {' '.join(map(str, h.edges[f]))}")
    return 1


def cmd_params(args) -> int:
    print(json.dumps(params_report(args.k, args.alpha, args.delta, args.m), sort_keys=False))
    return EXIT_OK


def cmd_witness(args) -> int:
    h = read_hypergraph(args.input)
    params = _params(h, args)
    res = run_complete(h, ColorTape(args.seed, h.n), params,
                       query_order(h.n, args.seed, args.order), debug=True)
    bounds = prob_bounds(h.k, params.alpha)
    for rep in res.engine.witness_reports:
        rec = dict(rep)
        tree = rec.pop("tree")
        rec.update(tree.to_dict())
        rec["log2_pm"], rec["log2_pw"], rec["log2_q"] = bounds.p_m, bounds.p_w, bounds.q
        if rep["proper"]:
            eb = event_prob_bound(tree, bounds)
            rec["log2_event_bound"] = eb.log2_product
            rec["log2_q_power"] = eb.log2_q_power
        else:
            rec["log2_event_bound"] = rec["log2_q_power"] = None
        print(json.dumps(rec))
    if res.failure is not None:
        print(f"FAIL {res.failure.kind.value}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_bench(args) -> int:
    ns = tuple(int(x) for x in args.ns.split(",") if x.strip())
    family = Family(ns=ns, k=args.k, d=args.d, alpha=args.alpha, order=args.order)
    seeds = range(args.seed_start, args.seed_start + args.seeds)
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", encoding="utf-8")
    try:
        for rec in bench(family, list(seeds), args.debug or debug_from_env()):
            out.write(json.dumps(rec, sort_keys=True) + "\n")
            out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hlc", description="Local 2-coloring of k-uniform hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random k-uniform hypergraph of bounded vertex degree")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--seed", type=_u64, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    def instance(sp, order=True):
        sp.add_argument("--in", dest="input", required=True)
        sp.add_argument("--alpha", type=float, default=0.22)
        sp.add_argument("--seed", type=_u64, default=0)
        sp.add_argument("--comp-bound", type=int)
        sp.add_argument("--trial-budget", type=int)
        sp.add_argument("--debug", action="store_true", help="run the invariant checks")
        if order:
            sp.add_argument("--order", choices=("random", "ascending"), default="random")

    c = sub.add_parser("color", help="color a whole instance")
    instance(c)
    c.add_argument("--algo", choices=("lca", "alon", "mt", "conservative"), default="lca")
    c.add_argument("--out")
    c.add_argument("--stats")
    c.add_argument("--max-steps", type=int, help="step budget for --algo mt|conservative")
    c.set_defaults(func=cmd_color)

    q = sub.add_parser("query", help="answer individual vertex queries")
    instance(q, order=False)
    q.add_argument("--vertices", required=True)
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="check a coloring file")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--coloring", required=True)
    v.set_defaults(func=cmd_verify)

    pr = sub.add_parser("params", help="thresholds, bounds and condition verdicts as JSON")
    pr.add_argument("--k", type=int, required=True)
    pr.add_argument("--alpha", type=float, required=True)
    pr.add_argument("--delta", type=int)
    pr.add_argument("--m", type=int)
    pr.set_defaults(func=cmd_params)

    w = sub.add_parser("witness", help="witness tree per component, as JSON lines")
    instance(w)
    w.set_defaults(func=cmd_witness)

    b = sub.add_parser("bench", help="per-query latency sweep, as JSON lines")
    b.add_argument("--ns", default="10000,40000,160000")
    b.add_argument("--k", type=int, default=48)
    b.add_argument("--d", type=int, default=4)
    b.add_argument("--alpha", type=float, default=0.22)
    b.add_argument("--seeds", type=int, default=20)
    b.add_argument("--seed-start", type=int, default=0)
    b.add_argument("--order", choices=("random", "ascending"), default="random")
    b.add_argument("--debug", action="store_true")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (OSError, HypergraphFormatError, InfeasibleParameters, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
