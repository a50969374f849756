"""Turning the optimal assignment into a tour.

Every tour t can be written as sigma∘s, where sigma is the optimal assignment
and s a product of disjoint cycles of sigma's reduced matrix whose values add
up to cost(t) - cost(sigma). So once some tour of cost cost(sigma) + m is
known, only cycles of value below m matter. They come from the bounded F-W
sweeps first and then from exhaustive cycle trees, and disjoint products of
them are tried as tour repairs, each success shrinking m.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from . import kernels
from .cycles import CycleCandidate, determining_rotation, make_candidate
from .fw import BoundedCycleSearch
from .greedy import GreedyTrace, Phase1Params, phase1_run
from .matrix import CostMatrix, ReducedMatrix
from .perm import Permutation, compose, format_cycles, is_tour, permutation_cost, random_tour

OPTIMAL = "optimal-proven"
EXHAUSTED = "budget-exhausted"


@dataclass
class BoundState:
    best_tour: Permutation
    best_value: int
    ap_value: int
    history: list[int] = field(default_factory=list)
    sources: list[str] = field(default_factory=list)

    @property
    def m(self) -> int:
        return self.best_value - self.ap_value

    def offer(self, tour: Permutation, value, source: str) -> bool:
        if value >= self.best_value:
            return False
        assert is_tour(tour)
        self.best_tour = tour
        self.best_value = value
        self.history.append(self.m)
        self.sources.append(source)
        return True


@dataclass
class CTree:
    """Outcome of the cycle-tree search: cycles found and whether it finished."""

    roots: list[int]
    bound: int
    cycles: list[CycleCandidate]
    nodes: int
    complete: bool


@dataclass
class Phase3Params:
    restarts: int | None = None
    product_cap: int | None = None
    node_budget: int = 1_000_000
    time_limit: float = 60.0
    product_budget: int = 2_000_000
    backend: str | None = None


def _tours_of(trace: GreedyTrace, m: CostMatrix):
    """Tour candidates from a trace: its derangements, latest first, then each
    bag move applied to the derangement it was built against, cheapest first."""
    for p in reversed(trace.derangements):
        yield p, "derangement"
    for mv in sorted(trace.bag, key=lambda mv: mv.sort_key()):
        p = trace.derangements[mv.base]
        for cy in mv.cycles:
            p = compose(p, Permutation.from_cycle(cy.vertices, p.n))
        yield p, f"bag {mv}"


def _best_of(trace: GreedyTrace, m: CostMatrix, skip_start: bool):
    best = None
    for p, src in _tours_of(trace, m):
        if skip_start and p is trace.derangements[0]:
            continue
        if is_tour(p):
            v = permutation_cost(p, m)
            if best is None or v < best[1]:
                best = (p, v, src)
    return best


def initial_tour(
    trace: GreedyTrace,
    sigma_ap: Permutation,
    m: CostMatrix,
    restarts: int,
    rng: random.Random,
    phase1_params: Phase1Params | None = None,
) -> BoundState:
    ap_value = permutation_cost(sigma_ap, m)
    if is_tour(sigma_ap):
        return BoundState(sigma_ap, ap_value, ap_value, [0], ["assignment"])
    found = _best_of(trace, m, skip_start=True)
    if found is None:
        # Only the random start tour so far: rerun the greedy phase from fresh
        # random tours and keep whatever tour turns up cheapest.
        found = _best_of(trace, m, skip_start=False)
        for k in range(restarts):
            d0 = random_tour(m.n, rng)
            sub = phase1_run(m, d0, phase1_params)
            cand = _best_of(sub, m, skip_start=False)
            if cand is not None and cand[1] < found[1]:
                found = (cand[0], cand[1], f"restart {k + 1} {cand[2]}")
    p, v, src = found
    return BoundState(p, v, ap_value, [v - ap_value], [src])


@dataclass
class ProductSearch:
    nodes: int = 0
    cap_binding: bool = False
    complete: bool = True
    improvements: int = 0


def improve_by_products(
    bounds: BoundState,
    cycles: list[CycleCandidate],
    sigma_ap: Permutation,
    m: CostMatrix,
    cap: int,
    budget: int = 2_000_000,
    stats: ProductSearch | None = None,
) -> ProductSearch:
    """Try sigma_ap∘s for products s of pairwise disjoint cycles whose total
    stays below the current bound, in ascending order of value. The bound is
    re-read after every improvement."""
    stats = stats or ProductSearch()
    pool = sorted((c for c in cycles if c.total < bounds.m), key=lambda c: c.sort_key())
    n = sigma_ap.n
    perms = [Permutation.from_cycle(c.vertices, n) for c in pool]

    def dfs(start: int, mask: int, total: int, chosen: list[int]) -> None:
        for i in range(start, len(pool)):
            c = pool[i]
            t = total + c.total
            if t >= bounds.m:
                break
            if mask & c.mask:
                continue
            if len(chosen) >= cap:
                stats.cap_binding = True
                return
            stats.nodes += 1
            if stats.nodes > budget:
                stats.complete = False
                return
            chosen.append(i)
            p = sigma_ap
            for j in chosen:
                p = compose(p, perms[j])
            if is_tour(p):
                value = permutation_cost(p, m)
                if bounds.offer(p, value, "product " + "".join(str(pool[j]) for j in chosen)):
                    stats.improvements += 1
            else:
                dfs(i + 1, mask | c.mask, t, chosen)
            chosen.pop()
            if not stats.complete:
                return

    dfs(0, 0, 0, [])
    return stats


def ctree_search(
    r: ReducedMatrix,
    bound: int,
    roots: list[int],
    node_budget: int = 1_000_000,
    time_limit: float | None = None,
    backend: str | None = None,
) -> CTree:
    """Exhaustive depth-first cycle trees from ``roots`` (1-based).

    Every cycle of value below ``bound`` has a rotation whose prefix sums all
    stay below its total, so it is reached from that rotation's first vertex
    as long as that vertex is a root. Branches are also cut when the prefix
    plus the shortest way back to the root reaches the bound.
    """
    if bound <= 0 or not roots:
        return CTree(list(roots), bound, [], 0, True)
    kern = kernels.get(backend)
    arr = r.to_array()
    dist, _ = kern.fw_apsp(arr)
    n = r.n
    eager = max(1, n // max(1, int(math.log2(n))))
    deadline = time.monotonic() + time_limit if time_limit else 0.0
    raw, nodes, exhausted = kern.ctree_dfs(arr, dist, [v - 1 for v in roots], int(bound), int(node_budget), eager, deadline)
    seen = {}
    for verts, _value in raw:
        cand = make_candidate([v + 1 for v in verts], r)
        key = cand.canonical
        if key not in seen:
            seen[key] = determining_rotation(cand)
    cycles = sorted(seen.values(), key=lambda c: c.sort_key())
    return CTree(list(roots), bound, cycles, int(nodes), not exhausted)


def choose_roots(r: ReducedMatrix, bound, found: list[CycleCandidate]) -> list[int]:
    """Vertices with an out-arc below the bound; first vertices of the
    determining rotations of already-found cycles go first."""
    n = r.n
    eligible = [v for v in range(1, n + 1) if any(r.r[v - 1][k] < bound for k in range(n) if k != v - 1)]
    first = []
    for c in found:
        v = c.vertices[0]
        if v in eligible and v not in first:
            first.append(v)
    return first + [v for v in eligible if v not in first]


@dataclass
class Phase3Result:
    bounds: BoundState
    certificate: str
    bounded_cycles: list[CycleCandidate]
    ctree: CTree | None
    products: ProductSearch
    cap: int
    events: list[str]


def phase3_run(
    m: CostMatrix,
    trace: GreedyTrace,
    sigma_ap: Permutation,
    params: Phase3Params | None = None,
    rng: random.Random | None = None,
    phase1_params: Phase1Params | None = None,
) -> Phase3Result:
    params = params or Phase3Params()
    rng = rng or random.Random(0)
    n = m.n
    lg = max(1, int(math.log2(n)))
    restarts = params.restarts if params.restarts is not None else n * lg
    cap = params.product_cap if params.product_cap is not None else lg
    events: list[str] = []

    bounds = initial_tour(trace, sigma_ap, m, restarts, rng, phase1_params)
    events.append(f"TOUR0 {format_cycles(bounds.best_tour)} {bounds.best_value}")
    events.append(f"M0 {bounds.m}")
    products = ProductSearch()
    if bounds.m <= 0:
        events.append(f"TSPOPT {format_cycles(bounds.best_tour)} {bounds.best_value}")
        events.append(f"CERT {OPTIMAL}")
        return Phase3Result(bounds, OPTIMAL, [], None, products, cap, events)

    r = ReducedMatrix(m, sigma_ap)
    search = BoundedCycleSearch(r, bounds.m)
    bounded: list[CycleCandidate] = []
    for cyc in search:
        bounded.append(cyc)
        improve_by_products(bounds, bounded, sigma_ap, m, cap, params.product_budget, products)
        search.bound = bounds.m
    if bounded:
        events.append("BOUNDED " + " ".join(f"{c}={c.total}" for c in bounded))
    else:
        events.append("BOUNDED none")

    roots = choose_roots(r, bounds.m, bounded)
    tree = ctree_search(r, bounds.m, roots, params.node_budget, params.time_limit, params.backend)
    known = {c.canonical for c in bounded}
    extra = [c for c in tree.cycles if c.canonical not in known]
    events.append(
        f"CTREE roots {len(roots)} nodes {tree.nodes} new cycles {len(extra)} "
        + ("complete" if tree.complete else "stopped at budget")
    )
    # Products are re-searched from scratch over the full pool so the outcome
    # does not depend on the order cycles were discovered in.
    products = ProductSearch()
    improve_by_products(bounds, bounded + extra, sigma_ap, m, cap, params.product_budget, products)
    if products.cap_binding:
        events.append(f"PRODUCT CAP {cap} binding")
    proven = tree.complete and products.complete and not products.cap_binding
    cert = OPTIMAL if proven else EXHAUSTED
    events.append(f"TSPOPT {format_cycles(bounds.best_tour)} {bounds.best_value}")
    events.append(f"CERT {cert}")
    return Phase3Result(bounds, cert, bounded, tree, products, cap, events)
