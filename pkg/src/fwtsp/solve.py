"""End-to-end driver: configuration, the three phases, oracle checks, reports."""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field

from . import oracles
from .fw import phase2_run
from .greedy import Phase1Params, phase1_run
from .matrix import INF, CostMatrix
from .perm import Permutation, decompose, format_cycles, format_row, random_tour
from .tour import OPTIMAL, Phase3Params, phase3_run

REPORT_SCHEMA = "fwtsp-report/1"


@dataclass
class SolveConfig:
    seed: int = 0
    start_tour: Permutation | None = None
    phase: int = 3
    log_base: float = 2.0
    start_budget: int | None = None
    rank_budget: int | None = None
    final_sweep: bool = True
    sweep_all_starts: bool = False
    restarts: int | None = None
    product_cap: int | None = None
    node_budget: int = 1_000_000
    time_limit: float = 60.0
    oracle_check: bool = False
    backend: str | None = None

    def phase1_params(self, n: int) -> Phase1Params:
        p = Phase1Params.for_size(n, self.log_base, final_sweep=self.final_sweep, sweep_all_starts=self.sweep_all_starts)
        if self.start_budget is not None:
            p.start_budget = self.start_budget
        if self.rank_budget is not None:
            p.rank_budget = self.rank_budget
        return p

    def describe(self) -> dict:
        out = asdict(self)
        out["start_tour"] = format_cycles(self.start_tour) if self.start_tour else None
        out.pop("time_limit")  # wall-clock settings stay out of the byte-stable report
        out.pop("backend")
        return out


@dataclass
class SolveResult:
    report: dict
    lines: list[str] = field(default_factory=list)
    ok: bool = True

    def to_json(self) -> str:
        return json.dumps(self.report, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        return "\n".join(self.lines) + "\n"


def with_big_m(m: CostMatrix) -> tuple[CostMatrix, int | None]:
    """Replace missing off-diagonal arcs by a cost no tour of real arcs reaches."""
    if all(x != INF for i, row in enumerate(m.d) for j, x in enumerate(row) if i != j):
        return m, None
    big = m.n * max(1, m.max_finite()) + 1
    rows = [[None if i == j else (big if x == INF else x) for j, x in enumerate(row)] for i, row in enumerate(m.d)]
    return CostMatrix.from_rows(rows), big


def _cycles(p: Permutation) -> list[list[int]]:
    return [list(c) for c in decompose(p).cycles]


def solve(m: CostMatrix, config: SolveConfig | None = None) -> SolveResult:
    config = config or SolveConfig()
    work, big = with_big_m(m)
    n = m.n
    rng = random.Random(config.seed)
    d0 = config.start_tour or random_tour(n, rng)
    p1 = config.phase1_params(n)

    trace = phase1_run(work, d0, p1)
    lines = list(trace.events)
    report: dict = {
        "schema": REPORT_SCHEMA,
        "n": n,
        "config": config.describe(),
        "phase1": {
            "start": format_cycles(d0),
            "start_budget": p1.start_budget,
            "rank_budget": p1.rank_budget,
            "derangements": [format_row(p) for p in trace.derangements],
            "costs": list(trace.costs),
            "applied": [{"cycles": str(mv), "value": mv.total} for mv in trace.steps],
            "bag_size": len(trace.bag),
        },
    }
    feasible = lambda v: big is None or v < big  # noqa: E731

    ap_perm = trace.final
    ap_cost = trace.costs[-1]
    if config.phase >= 2:
        p2 = phase2_run(work, trace)
        lines.extend(p2.events)
        ap_perm, ap_cost = p2.perm, p2.cost
        report["phase2"] = {
            "assignment": format_cycles(ap_perm),
            "cycles": _cycles(ap_perm),
            "cost": ap_cost,
            "feasible": feasible(ap_cost),
            "applied": [{"cycle": str(c), "value": c.total} for c in p2.applied],
            "negative_paths": [{"path": path, "value": v} for path, v in p2.negative_paths],
        }
    tour_value = None
    certificate = None
    if config.phase >= 3:
        params = Phase3Params(config.restarts, config.product_cap, config.node_budget, config.time_limit, backend=config.backend)
        p3 = phase3_run(work, trace, ap_perm, params, rng, p1)
        lines.extend(p3.events)
        b = p3.bounds
        tour_value, certificate = b.best_value, p3.certificate
        report["phase3"] = {
            "tour": format_cycles(b.best_tour),
            "value": b.best_value,
            "feasible": feasible(b.best_value),
            "m0": b.history[0],
            "bound_history": list(b.history),
            "sources": list(b.sources),
            "certificate": certificate,
            "bounded_cycles": [{"cycle": str(c), "value": c.total} for c in p3.bounded_cycles],
            "ctree": None
            if p3.ctree is None
            else {
                "roots": p3.ctree.roots,
                "nodes": p3.ctree.nodes,
                "cycles": len(p3.ctree.cycles),
                "complete": p3.ctree.complete,
                "node_budget": config.node_budget,
            },
            "product_cap": p3.cap,
            "product_cap_binding": p3.products.cap_binding,
            "product_nodes": p3.products.nodes,
        }

    ok = True
    if config.oracle_check:
        real = lambda v: v if v is None or feasible(v) else INF  # noqa: E731
        checks, ok = oracle_checks(m, config.phase, real(ap_cost), real(tour_value), certificate)
        report["oracle"] = checks
        for c in checks["results"]:
            lines.append(f"ORACLE {c['name']} {c['status']} {c['detail']}")
        for note in checks["notices"]:
            lines.append(f"ORACLE notice {note}")
    report["ok"] = ok
    return SolveResult(report, lines, ok)


def oracle_checks(m: CostMatrix, phase: int, ap_cost, tour_value, certificate) -> tuple[dict, bool]:
    results, notices = [], []
    if phase >= 2:
        if m.n <= oracles.AP_GATE:
            opt = oracles.brute_ap(m).optimum
            status = "PASS" if opt == ap_cost else "FAIL"
            results.append({"name": "assignment", "status": status, "detail": f"solver {ap_cost} oracle {opt}"})
        else:
            notices.append(f"assignment oracle skipped: n={m.n} above gate {oracles.AP_GATE}")
    if phase >= 3:
        if m.n <= oracles.TSP_GATE:
            opt = oracles.held_karp_tsp(m).optimum
            if tour_value == INF or opt == INF:
                status = "PASS" if tour_value == opt or certificate != OPTIMAL else "FAIL"
                gap = None
            else:
                gap = tour_value - opt
                if certificate == OPTIMAL:
                    status = "PASS" if gap == 0 else "FAIL"
                else:
                    status = "PASS" if gap >= 0 else "FAIL"
            results.append(
                {"name": "tour", "status": status, "detail": f"solver {tour_value} oracle {opt} gap {gap} ({certificate})"}
            )
        else:
            notices.append(f"tour oracle skipped: n={m.n} above gate {oracles.TSP_GATE}")
    ok = all(r["status"] == "PASS" for r in results)
    return {"results": results, "notices": notices}, ok


GOLDEN_PREFIXES = ("D", "DIFF", "APPLY", "PHASE1", "NEGPATH", "APOPT", "TOUR0", "M0", "BOUNDED", "TSPOPT", "CERT")


def replay_config(**overrides) -> SolveConfig:
    """Knobs that reproduce the worked example: its start tour and
    natural-log budgets (three ranks, three starts at n = 8)."""
    from . import example1

    return SolveConfig(start_tour=example1.start_tour(), log_base=math.e, **overrides)


def _summary(lines: list[str]) -> list[str]:
    out = []
    for ln in lines:
        head = ln.split(" ", 1)[0]
        if head in GOLDEN_PREFIXES or (head[:1] == "D" and head[1:].isdigit()):
            out.append(ln)
    return out


@dataclass
class ReplayOutcome:
    ok: bool
    lines: list[str]
    summary: list[str]
    mismatch: str | None


def replay_example1(config: SolveConfig | None = None) -> ReplayOutcome:
    """Run the worked instance and diff its summary lines and walks against
    the frozen golden trace."""
    from . import example1

    config = config or replay_config()
    res = solve(example1.matrix(), config)
    summary = _summary(res.lines)
    mismatch = None
    for k, want in enumerate(example1.GOLDEN):
        got = summary[k] if k < len(summary) else "<missing>"
        if got != want:
            mismatch = f"line {k + 1}: expected {want!r}, got {got!r}"
            break
    if mismatch is None and len(summary) > len(example1.GOLDEN):
        mismatch = f"unexpected extra line {summary[len(example1.GOLDEN)]!r}"
    if mismatch is None:
        walks = iter(ln for ln in res.lines if ln.startswith("P = "))
        for want in example1.GOLDEN_WALKS:
            if not any(w == want for w in walks):
                mismatch = f"walk {want!r} not emitted in order"
                break
    return ReplayOutcome(mismatch is None, res.lines, summary, mismatch)
