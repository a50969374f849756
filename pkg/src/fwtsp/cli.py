"""Command-line entry point: gen, solve, replay-example1, oracle, tables."""

from __future__ import annotations

import argparse
import math
import random
import re
import sys
from pathlib import Path

from . import oracles
from .fw import BoundedCycleSearch, nvs_search
from .matrix import MatrixFormatError, ReducedMatrix, format_matrix, load_matrix, random_matrix
from .perm import format_cycle, format_cycles, parse_cycles
from .solve import SolveConfig, replay_config, replay_example1, solve


def _cost_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected LOW..HIGH, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty cost range {text!r}")
    return lo, hi


def _log_base(text: str) -> float:
    if text == "e":
        return math.e
    return float(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.n < 3:
        print(f"error: n must be at least 3, got {args.n}", file=sys.stderr)
        return 2
    lo, hi = args.costs
    m = random_matrix(args.n, lo, hi, random.Random(args.seed))
    _emit(format_matrix(m), args.out)
    return 0


def _config_from(args) -> SolveConfig:
    cfg = SolveConfig(
        seed=args.seed,
        phase=args.phase,
        log_base=args.log_base,
        start_budget=args.start_budget,
        rank_budget=args.rank_budget,
        final_sweep=not args.no_final_sweep,
        sweep_all_starts=args.sweep_all_starts,
        restarts=args.restarts,
        product_cap=args.product_cap,
        node_budget=args.node_budget,
        time_limit=args.time_limit,
        oracle_check=args.oracle_check,
        backend=args.backend,
    )
    return cfg


def cmd_solve(args) -> int:
    try:
        m = load_matrix(args.instance)
    except (OSError, MatrixFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cfg = _config_from(args)
    if args.start_tour:
        try:
            cfg.start_tour = parse_cycles(args.start_tour, m.n)
        except ValueError as exc:
            print(f"error: --start-tour: {exc}", file=sys.stderr)
            return 2
    try:
        res = solve(m, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        text = res.to_json()
    else:
        lines = res.lines if args.trace else [ln for ln in res.lines if not ln.startswith("(") and not ln.startswith("P = ")]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if res.ok else 1


def cmd_replay(args) -> int:
    overrides = {}
    if args.rank_budget is not None:
        overrides["rank_budget"] = args.rank_budget
    if args.start_budget is not None:
        overrides["start_budget"] = args.start_budget
    if args.log_base is not None:
        overrides["log_base"] = args.log_base
    outcome = replay_example1(replay_config(**overrides))
    shown = outcome.lines if args.trace else outcome.summary
    for ln in shown:
        print(ln)
    if outcome.ok:
        print("REPLAY PASS")
        return 0
    print(f"REPLAY FAIL {outcome.mismatch}")
    return 1


def cmd_oracle(args) -> int:
    try:
        m = load_matrix(args.instance)
        if args.which == "ap":
            rep = oracles.brute_ap(m)
            print(f"assignment optimum {rep.optimum} {format_cycles(rep.optimizer) if rep.optimizer else '-'}")
            return 0
        if args.which == "tsp":
            rep = oracles.held_karp_tsp(m)
            print(f"tour optimum {rep.optimum} {format_cycles(rep.optimizer) if rep.optimizer else '-'}")
            return 0
        perm = parse_cycles(args.perm, m.n)
        r = ReducedMatrix(m, perm)
        if args.which == "bf":
            dist, flag = oracles.bellman_ford(r, args.source)
            print("dist " + " ".join(str(x) for x in dist))
            print(f"negative cycle {'yes' if flag else 'no'}")
            return 0
        for verts, value in oracles.enumerate_cycles_upto(r, args.bound):
            print(f"{format_cycle(verts)} {value}")
        return 0
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def cmd_tables(args) -> int:
    """Dump the working matrix after each sweep of either threshold variant."""
    try:
        m = load_matrix(args.instance)
        perm = parse_cycles(args.perm, m.n)
        r = ReducedMatrix(m, perm)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.bound is None:
        result = nvs_search(r, stop_at_first=False)
        state, reports = result.state, result.reports
        found = [result.cycle] if result.cycle else []
    else:
        search = BoundedCycleSearch(r, args.bound)
        found = list(search)
        state, reports = search.state, search.reports
    print("start")
    print(_dump_initial(r))
    it = 0
    for rep in reports:
        if rep.iteration != it:
            it = rep.iteration
            print(f"iteration {it}")
        for ln in rep.lines():
            print(f"  column {rep.column}: {ln}")
    print("final")
    print(state.dump())
    for c in found:
        print(f"cycle {c} {c.total}")
    if not found:
        print("cycle none")
    return 0


def _dump_initial(r) -> str:
    from .matrix import format_reduced_table

    return format_reduced_table(r.r, r.perm)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fwtsp", description="Cycle-cancellation assignment and tour solver.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("n", type=int)
    g.add_argument("--costs", type=_cost_range, default=(1, 100), help="LOW..HIGH (default 1..100)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run the phases on an instance file")
    s.add_argument("instance")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--start-tour", help='pin the start tour, e.g. "(1 2 3 4 5 6 7 8)"')
    s.add_argument("--phase", type=int, choices=(1, 2, 3), default=3, help="stop after this phase")
    s.add_argument("--log-base", type=_log_base, default=2.0, help="base for the start/rank budgets (number or 'e')")
    s.add_argument("--start-budget", type=int)
    s.add_argument("--rank-budget", type=int)
    s.add_argument("--no-final-sweep", action="store_true", help="do not try starts past the start budget")
    s.add_argument("--sweep-all-starts", action="store_true", help="apply the best cycle over all starts")
    s.add_argument("--restarts", type=int)
    s.add_argument("--product-cap", type=int)
    s.add_argument("--node-budget", type=int, default=1_000_000)
    s.add_argument("--time-limit", type=float, default=60.0, help="seconds for the cycle-tree search")
    s.add_argument("--backend", choices=("compiled", "python"))
    s.add_argument("--trace", action="store_true", help="include every walk step")
    s.add_argument("--oracle-check", action="store_true")
    s.add_argument("--json", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("replay-example1", help="replay the 8-vertex worked example against its golden trace")
    r.add_argument("--rank-budget", type=int)
    r.add_argument("--start-budget", type=int)
    r.add_argument("--log-base", type=_log_base)
    r.add_argument("--trace", action="store_true")
    r.set_defaults(func=cmd_replay)

    o = sub.add_parser("oracle", help="run one exhaustive oracle")
    o.add_argument("which", choices=("ap", "tsp", "bf", "cycles"))
    o.add_argument("instance")
    o.add_argument("--perm", default="", help="derangement for bf/cycles, cycle notation")
    o.add_argument("--source", type=int)
    o.add_argument("--bound", type=int, default=10)
    o.set_defaults(func=cmd_oracle)

    t = sub.add_parser("tables", help="dump threshold F-W sweeps on a reduced matrix")
    t.add_argument("instance")
    t.add_argument("--perm", required=True)
    t.add_argument("--bound", type=int, help="positive bound for the bounded variant; omit for negative cycles")
    t.set_defaults(func=cmd_tables)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
