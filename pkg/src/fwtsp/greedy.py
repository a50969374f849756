"""Greedy negative-cycle construction over the reduced matrix.

From a start vertex with a negative DIFF, a walk follows the cheapest
non-assigned column of each vertex it reaches (moved through the current
derangement's inverse). Every prefix that closes back to the start with a
negative value is a candidate, and so is the loop cut off when the walk
repeats a vertex. The best candidate of a start vertex is applied, and the
DIFF rows of the moved vertices refreshed, until no start yields anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .cycles import CycleCandidate, determining_rotation, make_candidate
from .matrix import INF, CostMatrix, ReducedMatrix, build_min_order, diff
from .perm import Permutation, compose, format_cycles, format_row, inverse, is_tour, permutation_cost


def admissible(c: Sequence[int], p: Permutation) -> bool:
    """True when no arc (a, b) of c has p(b) == a, so p∘c keeps every point moved."""
    k = len(c)
    return all(p(c[(t + 1) % k]) != c[t] for t in range(k))


@dataclass
class Phase1Params:
    start_budget: int
    rank_budget: int
    final_sweep: bool = True
    sweep_all_starts: bool = False

    @classmethod
    def for_size(cls, n: int, log_base: float = 2, **kw) -> Phase1Params:
        lg = math.log(n, log_base) if log_base != math.e else math.log(n)
        return cls(max(1, math.ceil(lg - 1e-12)), int(math.floor(lg + 1e-12)) + 1, **kw)


@dataclass(frozen=True)
class Move:
    """A product of disjoint cycles applied (or applicable) to derangement ``base``."""

    base: int
    cycles: tuple[CycleCandidate, ...]
    total: int

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.cycles)

    @property
    def key(self):
        return tuple(sorted(c.canonical for c in self.cycles))

    def sort_key(self):
        return (self.total, self.size, self.key)

    def __str__(self) -> str:
        return "".join(str(c) for c in self.cycles)


@dataclass
class GreedyTrace:
    m: CostMatrix
    derangements: list[Permutation] = field(default_factory=list)
    costs: list = field(default_factory=list)
    steps: list[Move] = field(default_factory=list)
    bag: list[Move] = field(default_factory=list)
    diff_tables: list[list] = field(default_factory=list)
    walks: list[list[int]] = field(default_factory=list)
    events: list[str] = field(default_factory=list)
    _bag_keys: set = field(default_factory=set)

    @property
    def final(self) -> Permutation:
        return self.derangements[-1]

    def record(self, p: Permutation, cycles, source: str = "phase1") -> None:
        idx = len(self.derangements) - 1
        total = sum(c.total for c in cycles)
        self.steps.append(Move(idx, tuple(cycles), total))
        self.derangements.append(p)
        self.costs.append(permutation_cost(p, self.m))

    def add_to_bag(self, move: Move) -> None:
        key = (move.base, move.key)
        if key not in self._bag_keys:
            self._bag_keys.add(key)
            self.bag.append(move)


@dataclass
class WalkResult:
    path: list[int]
    candidates: list[Move]
    arcs: list[str]


class _Walker:
    def __init__(self, m: CostMatrix, p: Permutation, min_order, base: int):
        self.m = m
        self.p = p
        self.pinv = inverse(p)
        self.r = ReducedMatrix(m, p)
        self.order = min_order
        self.base = base

    def first_column(self, v: int) -> int | None:
        pv = self.p(v)
        for c in self.order.order[v - 1]:
            if c != pv:
                return c
        return None

    def arc(self, v: int, c: int):
        d = self.m.d[v - 1]
        return d[c - 1] - d[self.p(v) - 1]


def greedy_walk(start: int, rank: int, walker: _Walker) -> WalkResult:
    """One trial from ``start`` using its rank-th cheapest column first."""
    r = walker.r.r
    c = walker.order.column(start, rank)
    arcs: list[str] = []
    if c == walker.p(start):
        return WalkResult([start], [], arcs)
    value = walker.arc(start, c)
    if value >= 0:
        return WalkResult([start], [], arcs)
    path = [start]
    pos = {start: 0}
    sums = [0]
    closures: list[tuple[int, CycleCandidate]] = []
    loop: CycleCandidate | None = None
    v = start
    while True:
        arcs.append(f"({v}, {c}) → ({v}, {walker.p(v)})  {value}")
        u = walker.pinv(c)
        total = sums[-1] + value
        if u in pos:
            idx = pos[u]
            path.append(u)
            cand = make_candidate(path[idx:-1], walker.r)
            if cand.total < 0:
                loop = cand
            break
        path.append(u)
        pos[u] = len(path) - 1
        sums.append(total)
        back = r[u - 1][start - 1]
        if back != INF and total + back < 0:
            closures.append((len(path) - 1, make_candidate(path, walker.r)))
        if total >= 0:
            break
        nxt = walker.first_column(u)
        if nxt is None:
            break
        v, c = u, nxt
        value = walker.arc(v, c)

    moves = [Move(walker.base, (determining_rotation(cl),), cl.total) for _, cl in closures]
    if loop is not None:
        moves.append(Move(walker.base, (determining_rotation(loop),), loop.total))
        lmask = loop.mask
        for _, cl in closures:
            if cl.mask & lmask == 0:
                moves.append(
                    Move(walker.base, (determining_rotation(cl), determining_rotation(loop)), cl.total + loop.total)
                )
    moves = [mv for mv in moves if all(admissible(cy.vertices, walker.p) for cy in mv.cycles)]
    return WalkResult(path, moves, arcs)


def _apply(p: Permutation, move: Move) -> Permutation:
    for cy in move.cycles:
        p = compose(p, Permutation.from_cycle(cy.vertices, p.n))
    return p


def _starts(table: list) -> list[int]:
    neg = [(v, i) for i, v in enumerate(table, start=1) if v < 0]
    return [i for _, i in sorted(neg)]


def _run_tier(starts, sweeping, walker, params, trace) -> Move | None:
    global_best = None
    for s in starts:
        if sweeping:
            trace.events.append(f"SWEEP start {s}")
        best = None
        for rank in range(1, params.rank_budget + 1):
            res = greedy_walk(s, rank, walker)
            if len(res.path) == 1:
                break
            trace.events.extend(res.arcs)
            trace.events.append(f"P = {res.path}")
            trace.walks.append(res.path)
            for mv in res.candidates:
                trace.add_to_bag(mv)
                if best is None or mv.sort_key() < best.sort_key():
                    best = mv
        if best is None or best.total >= 0:
            continue
        if not params.sweep_all_starts:
            return best
        if global_best is None or best.sort_key() < global_best.sort_key():
            global_best = best
    return global_best


def phase1_run(m: CostMatrix, d0: Permutation, params: Phase1Params | None = None) -> GreedyTrace:
    if d0.n != m.n:
        raise ValueError(f"size mismatch: start tour has {d0.n} vertices, matrix {m.n}")
    if not is_tour(d0):
        raise ValueError("phase 1 must start from an n-cycle")
    if permutation_cost(d0, m) == INF:
        raise ValueError("start tour uses a missing arc")
    params = params or Phase1Params.for_size(m.n)
    order = build_min_order(m)
    trace = GreedyTrace(m)
    p = d0
    trace.derangements.append(p)
    trace.costs.append(permutation_cost(p, m))
    table = [diff(m, p, order, i)[0] for i in range(1, m.n + 1)]

    while True:
        idx = len(trace.derangements) - 1
        trace.diff_tables.append(list(table))
        trace.events.append(f"D{idx} = {format_row(p)} cost {trace.costs[-1]}")
        trace.events.append("DIFF " + " ".join(str(x) for x in table))
        walker = _Walker(m, p, order, idx)
        starts = _starts(table)
        tiers = [starts[: params.start_budget]]
        if params.final_sweep:
            tiers.append(starts[params.start_budget:])
        chosen = None
        for tier_no, tier in enumerate(tiers):
            chosen = _run_tier(tier, tier_no > 0, walker, params, trace)
            if chosen is not None:
                break
        if chosen is None:
            break
        p = _apply(p, chosen)
        trace.events.append(f"APPLY {chosen} {chosen.total}")
        trace.record(p, chosen.cycles)
        for cy in chosen.cycles:
            for v in cy.vertices:
                table[v - 1] = diff(m, p, order, v)[0]

    trace.events.append(f"PHASE1 END {format_cycles(p)} {trace.costs[-1]}")
    return trace
