"""Floyd-Warshall triangle operations and the two threshold variants built on it.

Plain mode is textbook Floyd-Warshall with an intermediate-vertex path table.
Threshold mode only extends entries whose value is below a threshold:
threshold 0 searches for negative cycles (the negatively-valued-subpath
variant, used to cancel cycles until the assignment is optimal), and a
positive threshold enumerates cheap cycles of a matrix that has no negative
cycle (used to restore a tour).

In threshold mode each improved entry keeps its explicit simple path. When
joining two stored paths revisits a vertex, the walk is split into a simple
residual path plus the simple cycles it contained; those cycles are reported
as closures, and the residual is what gets stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from . import kernels
from .cycles import CycleCandidate, determining_rotation, make_candidate, split_walk
from .matrix import INF, INF64, ReducedMatrix
from .perm import Permutation, compose, format_cycles, format_row
from .perm import permutation_cost


class CorruptPathTable(RuntimeError):
    pass


class PathIndex:
    """Entries of the working matrix below a threshold, bucketed by column.

    With threshold 0 this holds exactly the negative entries, the set the
    search draws its extensions from.
    """

    def __init__(self, n: int, threshold):
        self.threshold = threshold
        self.buckets: list[dict[int, int | float]] = [dict() for _ in range(n)]

    def offer(self, i: int, k: int, value) -> None:
        if value < self.threshold:
            self.buckets[k][i] = value
        else:
            self.buckets[k].pop(i, None)

    def rows(self, k: int) -> list[int]:
        bucket = self.buckets[k]
        return sorted(i for i, v in bucket.items() if v < self.threshold)

    def entries(self) -> set[tuple[int, int]]:
        return {(i, k) for k, b in enumerate(self.buckets) for i, v in b.items() if v < self.threshold}


@dataclass
class TriangleReport:
    column: int
    iteration: int
    updates: list[tuple[int, int, int, int | float]] = field(default_factory=list)
    closures: list[CycleCandidate] = field(default_factory=list)
    merges_split: int = 0
    split_rows: list[int] = field(default_factory=list)

    def lines(self) -> list[str]:
        return [f"({i}, {j})({j}, {k}): {v}" for i, j, k, v in self.updates]


class FwState:
    """Working matrix, path table and bookkeeping for one engine run.

    ``values`` and ``path_table`` are 0-based lists; ``path_table`` holds the
    1-based intermediate vertex of the last improvement (0 = direct arc).
    """

    def __init__(self, r, threshold=None):
        self.r = r
        self.n = n = r.n
        self.values = [list(row) for row in r.r]
        self.path_table = [[0] * n for _ in range(n)]
        self.threshold = threshold
        self.iteration = 0
        self.paths: dict[tuple[int, int], tuple[int, ...]] | None = None
        self.index: PathIndex | None = None
        if threshold is not None:
            self.paths = {}
            self.index = PathIndex(n, threshold)
            for i in range(n):
                for k in range(n):
                    if i != k and self.values[i][k] != INF:
                        self.index.offer(i, k, self.values[i][k])
            self._entry_version = [[0] * n for _ in range(n)]
            self._row_version = [0] * n
            self._processed: dict[tuple[int, int], tuple[int, int]] = {}

    def set_threshold(self, threshold) -> None:
        self.threshold = threshold
        self.index.threshold = threshold

    def path(self, i: int, k: int) -> tuple[int, ...]:
        """0-based path for entry (i, k)."""
        return self.paths.get((i, k), (i, k))

    def improved_entries(self) -> list[tuple[int, int]]:
        if self.paths is not None:
            return sorted(self.paths)
        return [(i, k) for i in range(self.n) for k in range(self.n) if self.path_table[i][k]]

    def negative_paths(self) -> list[tuple[list[int], int]]:
        """Improved entries still holding a negative value, as 1-based paths."""
        out = []
        for i, k in self.improved_entries():
            v = self.values[i][k]
            if i != k and v < 0:
                out.append((reconstruct_path(self, i + 1, k + 1), v))
        out.sort(key=lambda pv: (pv[1], pv[0]))
        return out

    def dump(self, perm: Permutation | None = None) -> str:
        from .matrix import format_reduced_table

        perm = perm or getattr(self.r, "perm", None) or Permutation.identity(self.n)
        return format_reduced_table(self.values, perm)


def _store(state: FwState, i: int, k: int, value, path: tuple[int, ...], via: int) -> None:
    state.values[i][k] = value
    state.path_table[i][k] = via + 1
    state.paths[(i, k)] = path
    state.index.offer(i, k, value)
    state._entry_version[i][k] += 1
    state._row_version[i] += 1


def _path_value(w, path) -> int | float:
    return sum(w[path[t]][path[t + 1]] for t in range(len(path) - 1))


def triangle(state: FwState, j0: int) -> TriangleReport:
    """One triangle operation on column j0 (1-based) under the state's policy.

    Plain policy: d[i,k] = min(d[i,k], d[i,j0] + d[j0,k]) for every pair.
    Threshold policy: only entries (i, j0) below the threshold are extended,
    only results below it are kept, and i == k joins are closures.
    """
    j = j0 - 1
    report = TriangleReport(j0, state.iteration)
    W = state.values
    n = state.n
    if state.threshold is None:
        row_j = W[j]
        for i in range(n):
            a = W[i][j]
            if a == INF:
                continue
            Wi = W[i]
            for k in range(n):
                b = row_j[k]
                if b == INF:
                    continue
                c = a + b
                if c < Wi[k]:
                    Wi[k] = c
                    state.path_table[i][k] = j0
                    report.updates.append((i + 1, j0, k + 1, c))
        return report

    w = state.r.r
    idx = state.index
    for i in idx.rows(j):
        if i == j:
            continue
        stamp = (state._entry_version[i][j], state._row_version[j])
        if state._processed.get((i, j)) == stamp:
            continue
        a = W[i][j]
        left = state.path(i, j)
        left_set = set(left)
        row_j = W[j]
        for k in range(n):
            if k == j:
                continue
            b = row_j[k]
            if b == INF:
                continue
            c = a + b
            if c >= state.threshold:
                continue
            right = state.path(j, k)
            walk = left + right[1:]
            if k == i:
                _, loops = split_walk(walk)
                for loop in loops:
                    cand = make_candidate([v + 1 for v in loop], state.r)
                    if cand.total < state.threshold:
                        report.closures.append(cand)
                continue
            if left_set.isdisjoint(right[1:]):
                if c < W[i][k]:
                    _store(state, i, k, c, walk, j)
                    report.updates.append((i + 1, j0, k + 1, c))
                continue
            report.merges_split += 1
            report.split_rows.append(i + 1)
            residual, loops = split_walk(walk)
            for loop in loops:
                cand = make_candidate([v + 1 for v in loop], state.r)
                if cand.total < state.threshold:
                    report.closures.append(cand)
            res_value = _path_value(w, residual)
            if res_value < W[i][k] and res_value < state.threshold:
                _store(state, i, k, res_value, tuple(residual), j)
                report.updates.append((i + 1, j0, k + 1, res_value))
        state._processed[(i, j)] = (state._entry_version[i][j], state._row_version[j])
    return report


def sweep(state: FwState, max_iterations: int | None = None) -> Iterator[TriangleReport]:
    """Full column sweeps j = 1..n, repeated until a sweep changes nothing or
    the iteration cap (default n - 1) is reached."""
    if max_iterations is None:
        max_iterations = max(1, state.n - 1)
    while state.iteration < max_iterations:
        state.iteration += 1
        changed = False
        for j0 in range(1, state.n + 1):
            report = triangle(state, j0)
            changed = changed or bool(report.updates)
            yield report
        if not changed:
            break


def reconstruct_path(state: FwState, i: int, k: int) -> list[int]:
    """1-based walk behind entry (i, k)."""
    i0, k0 = i - 1, k - 1
    if state.values[i0][k0] == INF:
        raise ValueError(f"entry ({i}, {k}) is infinite")
    if state.paths is not None:
        return [v + 1 for v in state.path(i0, k0)]

    out = [i]

    def expand(a: int, b: int, depth: int) -> None:
        if depth > state.n or len(out) > state.n + 1:
            raise CorruptPathTable(f"path table expansion for ({i}, {k}) does not terminate")
        via = state.path_table[a - 1][b - 1]
        if via == 0 or via == a or via == b:
            out.append(b)
            return
        expand(a, via, depth + 1)
        expand(via, b, depth + 1)

    expand(i, k, 0)
    return out


# --- plain all-pairs ---------------------------------------------------------


def all_pairs(r, backend: str | None = None) -> FwState:
    """Plain Floyd-Warshall over every column once.

    Only meaningful when ``r`` has no negative cycle; with one, values fall
    without bound and the int64 kernel can overflow.

    The compiled kernel does the sweep when available; results are identical
    to repeated ``triangle`` calls.
    """
    state = FwState(r)
    dist, via = kernels.get(backend).fw_apsp(r.to_array())
    n = r.n
    for i in range(n):
        for k in range(n):
            x = int(dist[i, k])
            state.values[i][k] = INF if x >= INF64 // 2 else x
            state.path_table[i][k] = int(via[i, k])
    state.iteration = 1
    return state


def all_pairs_python(r) -> FwState:
    state = FwState(r)
    state.iteration = 1
    for j0 in range(1, r.n + 1):
        triangle(state, j0)
    return state


# --- negative cycles ---------------------------------------------------------


@dataclass
class NegativeCycleResult:
    cycle: CycleCandidate | None
    state: FwState
    iteration: int
    column: int | None
    reports: list[TriangleReport]


def nvs_search(r, max_iterations: int | None = None, stop_at_first: bool = True) -> NegativeCycleResult:
    """Run the negative-subpath sweeps; with ``stop_at_first`` return at the
    first negative closure (lowest column, then lowest closing row)."""
    state = FwState(r, threshold=0)
    reports = []
    first = None
    first_it = 0
    first_col = None
    for report in sweep(state, max_iterations):
        reports.append(report)
        if report.closures and first is None:
            first = determining_rotation(report.closures[0])
            first_it, first_col = report.iteration, report.column
            if stop_at_first:
                break
    return NegativeCycleResult(first, state, first_it or state.iteration, first_col, reports)


def find_negative_cycle(r, max_iterations: int | None = None) -> CycleCandidate | None:
    """First negative cycle found by the negative-subpath sweeps, or None.

    ``r`` must have a zero diagonal. Only negative entries are extended; by
    the rotation property of negative cycles this still finds one whenever one
    exists, within n - 1 sweeps.
    """
    return nvs_search(r, max_iterations).cycle


@dataclass
class Phase2Result:
    perm: Permutation
    cost: int | float
    applied: list[CycleCandidate]
    negative_paths: list[tuple[list[int], int]]
    excluded_arcs: list[tuple[int, int]]
    events: list[str]


def _masked(r, excluded):
    from .matrix import WeightMatrix

    rows = [list(row) for row in r.r]
    for a, b in excluded:
        rows[a - 1][b - 1] = INF
    wm = WeightMatrix(rows)
    return wm


def phase2_run(m, trace) -> Phase2Result:
    """Cancel negative cycles of the reduced matrix until none is left.

    Starts from the last derangement of ``trace`` and appends every applied
    cycle to it (the trace keeps them for tour building).
    """
    from .greedy import admissible

    p = trace.final
    events: list[str] = []
    applied = []
    excluded: list[tuple[int, int]] = []
    while True:
        r = ReducedMatrix(m, p)
        work = _masked(r, excluded) if excluded else r
        result = nvs_search(work)
        cyc = result.cycle
        if cyc is None:
            neg = result.state.negative_paths()
            for path, value in neg:
                events.append(f"NEGPATH {path} {value}")
            break
        if not admissible(cyc.vertices, p):
            # Cannot happen when infinities are honoured: the forbidden arc
            # reads d[a, a]. Kept for matrices handed in with finite diagonals.
            vs = cyc.vertices
            for t, a in enumerate(vs):
                b = vs[(t + 1) % len(vs)]
                if p(b) == a:
                    excluded.append((a, b))
                    events.append(f"EXCLUDE ({a}, {b})")
                    break
            continue
        cyc = make_candidate(cyc.vertices, r)
        p = compose(p, Permutation.from_cycle(cyc.vertices, m.n))
        applied.append(cyc)
        trace.record(p, [cyc], source="phase2")
        events.append(f"NEGCYCLE {cyc} {cyc.total} iteration {result.iteration}")
        events.append(f"D{len(trace.derangements) - 1} = {format_row(p)} cost {permutation_cost(p, m)}")
        excluded = []
    cost = permutation_cost(p, m)
    events.append(f"APOPT {format_cycles(p)} {cost}")
    trace.events.extend(events)
    return Phase2Result(p, cost, applied, neg, excluded, events)


# --- bounded cycles ----------------------------------------------------------


class BoundedCycleSearch:
    """Iterator over simple cycles of value below ``bound`` found by the
    bounded sweeps. Lowering ``bound`` while iterating takes effect from the
    next extension on.
    """

    def __init__(self, r, bound, max_iterations: int | None = None):
        if bound <= 0:
            raise ValueError("bound must be positive")
        self.state = FwState(r, threshold=bound)
        self.max_iterations = max_iterations
        self.seen: set[tuple[int, ...]] = set()
        self.reports: list[TriangleReport] = []

    @property
    def bound(self):
        return self.state.threshold

    @bound.setter
    def bound(self, value) -> None:
        if value < self.state.threshold:
            self.state.set_threshold(value)

    def __iter__(self) -> Iterator[CycleCandidate]:
        for report in sweep(self.state, self.max_iterations):
            self.reports.append(report)
            for cand in report.closures:
                key = cand.canonical
                if key in self.seen or cand.total >= self.bound:
                    continue
                self.seen.add(key)
                yield determining_rotation(cand)


def enumerate_bounded_cycles(r, bound, max_iterations: int | None = None) -> BoundedCycleSearch:
    return BoundedCycleSearch(r, bound, max_iterations)
