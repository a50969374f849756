"""Exhaustive ground truth used to check the solver.

Every oracle refuses instances beyond its size gate instead of falling back
to something approximate.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .matrix import INF, CostMatrix
from .perm import Permutation, canonical_cycle

AP_GATE = 10
TSP_GATE = 15
ENUM_GATE = 8
FACTORIAL_GATE = 10


class OracleSizeError(ValueError):
    pass


@dataclass
class OracleReport:
    optimum: int | float
    optimizer: object = None
    count: int = 0
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)


def _gate(n: int, limit: int, name: str) -> None:
    if n > limit:
        raise OracleSizeError(f"{name} refuses n={n} (limit {limit})")


def brute_ap(m: CostMatrix) -> OracleReport:
    """Exact assignment optimum by dynamic programming over row subsets.

    Rows are assigned in order 1..n; state is the set of used columns. Every
    permutation is one path through the table, so the minimum is exact.
    """
    _gate(m.n, AP_GATE, "brute_ap")
    t0 = time.perf_counter()
    n = m.n
    d = m.d
    full = 1 << n
    best = [INF] * full
    choice = [-1] * full
    best[0] = 0
    states = 0
    for mask in range(full):
        cur = best[mask]
        if cur == INF:
            continue
        i = bin(mask).count("1")
        if i == n:
            continue
        row = d[i]
        for j in range(n):
            bit = 1 << j
            if mask & bit or row[j] == INF:
                continue
            states += 1
            val = cur + row[j]
            nxt = mask | bit
            if val < best[nxt]:
                best[nxt] = val
                choice[nxt] = j
    opt = best[full - 1]
    perm = None
    if opt != INF:
        row_form = [0] * n
        mask = full - 1
        for i in range(n - 1, -1, -1):
            j = choice[mask]
            row_form[i] = j + 1
            mask ^= 1 << j
        perm = Permutation(tuple(row_form))
    return OracleReport(opt, perm, states, time.perf_counter() - t0)


def factorial_ap(m: CostMatrix) -> OracleReport:
    """Assignment optimum by listing every permutation (small n only)."""
    _gate(m.n, FACTORIAL_GATE, "factorial_ap")
    t0 = time.perf_counter()
    d = m.d
    best, arg, count = INF, None, 0
    for row in itertools.permutations(range(m.n)):
        count += 1
        total = 0
        for i, j in enumerate(row):
            total += d[i][j]
            if total >= best:
                break
        else:
            best, arg = total, row
    perm = Permutation(tuple(j + 1 for j in arg)) if arg is not None else None
    return OracleReport(best, perm, count, time.perf_counter() - t0)


def hungarian_ap(m: CostMatrix) -> OracleReport:
    """Assignment optimum from scipy's solver, as an independent second opinion."""
    t0 = time.perf_counter()
    big = (m.max_finite() + 1) * (m.n + 1)
    a = np.array([[big if x == INF else x for x in row] for row in m.d], dtype=np.int64)
    rows, cols = linear_sum_assignment(a)
    total = int(a[rows, cols].sum())
    perm = Permutation(tuple(int(c) + 1 for c in cols))
    if total >= big:
        return OracleReport(INF, None, 0, time.perf_counter() - t0)
    return OracleReport(total, perm, 0, time.perf_counter() - t0)


def held_karp_tsp(m: CostMatrix) -> OracleReport:
    """Exact directed tour optimum by subset dynamic programming from vertex 1."""
    _gate(m.n, TSP_GATE, "held_karp_tsp")
    t0 = time.perf_counter()
    n = m.n
    d = m.d
    if n == 1:
        return OracleReport(INF, None)
    size = 1 << (n - 1)
    # cost[mask][j]: cheapest path 1 -> ... -> j+2 visiting exactly mask (over vertices 2..n)
    cost = [[INF] * (n - 1) for _ in range(size)]
    parent = [[-1] * (n - 1) for _ in range(size)]
    for j in range(n - 1):
        cost[1 << j][j] = d[0][j + 1]
    states = 0
    for mask in range(1, size):
        row = cost[mask]
        for j in range(n - 1):
            cj = row[j]
            if cj == INF or not mask & (1 << j):
                continue
            dj = d[j + 1]
            for k in range(n - 1):
                bit = 1 << k
                if mask & bit:
                    continue
                states += 1
                val = cj + dj[k + 1]
                nm = mask | bit
                if val < cost[nm][k]:
                    cost[nm][k] = val
                    parent[nm][k] = j
    full = size - 1
    best, last = INF, -1
    for j in range(n - 1):
        val = cost[full][j] + d[j + 1][0]
        if val < best:
            best, last = val, j
    if best == INF:
        return OracleReport(INF, None, states, time.perf_counter() - t0)
    order = []
    mask, j = full, last
    while j != -1:
        order.append(j + 2)
        mask, j = mask ^ (1 << j), parent[mask][j]
    order.append(1)
    order.reverse()
    return OracleReport(best, Permutation.from_cycle(order, n), states, time.perf_counter() - t0)


def brute_tsp(m: CostMatrix) -> OracleReport:
    """Tour optimum by listing all (n-1)! orders that start at vertex 1."""
    _gate(m.n, FACTORIAL_GATE, "brute_tsp")
    t0 = time.perf_counter()
    d = m.d
    best, arg, count = INF, None, 0
    for rest in itertools.permutations(range(1, m.n)):
        count += 1
        prev, total = 0, 0
        for v in rest:
            total += d[prev][v]
            prev = v
        total += d[prev][0]
        if total < best:
            best, arg = total, (0,) + rest
    perm = Permutation.from_cycle([v + 1 for v in arg], m.n) if arg is not None else None
    return OracleReport(best, perm, count, time.perf_counter() - t0)


def bellman_ford(r, source: int | None = None) -> tuple[list, bool]:
    """Distances from ``source`` (1-based) and a negative-cycle flag.

    With ``source=None`` a virtual source reaches every vertex at distance 0,
    so the flag covers the whole graph. The flag is set iff some arc still
    relaxes on pass n.
    """
    n = r.n
    w = r.r
    arcs = [(i, j, w[i][j]) for i in range(n) for j in range(n) if i != j and w[i][j] != INF]
    if source is None:
        dist = [0] * n
    else:
        dist = [INF] * n
        dist[source - 1] = 0
    for _ in range(n - 1):
        changed = False
        for i, j, x in arcs:
            di = dist[i]
            if di != INF and di + x < dist[j]:
                dist[j] = di + x
                changed = True
        if not changed:
            break
    flag = any(dist[i] != INF and dist[i] + x < dist[j] for i, j, x in arcs)
    return dist, flag


def enumerate_cycles_upto(r, bound, max_len: int | None = None) -> list[tuple[tuple[int, ...], int]]:
    """Every simple cycle with value < bound, as (canonical vertices, value).

    Plain DFS from each vertex over larger vertices only; no value pruning.
    """
    _gate(r.n, ENUM_GATE, "enumerate_cycles_upto")
    n = r.n
    w = r.r
    if max_len is None:
        max_len = n
    out = []

    def dfs(root, v, path, value, used):
        for u in range(root, n):
            x = w[v][u]
            if u == v or x == INF:
                continue
            if u == root:
                if len(path) >= 2 and value + x < bound:
                    out.append((tuple(p + 1 for p in path), value + x))
                continue
            if used & (1 << u) or len(path) >= max_len:
                continue
            path.append(u)
            dfs(root, u, path, value + x, used | (1 << u))
            path.pop()

    for root in range(n):
        dfs(root, root, [root], 0, 1 << root)
    out.sort(key=lambda cv: (cv[1], len(cv[0]), cv[0]))
    return out


def theorem1_check(weights: Sequence[int]) -> int | None:
    """Index of a rotation whose every prefix sum is negative, or None.

    None is returned exactly when no rotation qualifies; for a negative total
    that never happens.
    """
    k = len(weights)
    if k == 0:
        raise ValueError("empty weight list")
    for start in range(k):
        acc = 0
        for t in range(k):
            acc += weights[(start + t) % k]
            if acc >= 0:
                break
        else:
            return start
    return None


def canonical_set(cycles) -> set[tuple[int, ...]]:
    return {canonical_cycle(c) for c in cycles}

