import math
import random

import pytest

from fwtsp import example1, oracles
from fwtsp.cycles import make_candidate
from fwtsp.fw import phase2_run
from fwtsp.greedy import Phase1Params, phase1_run
from fwtsp.matrix import CostMatrix, ReducedMatrix, random_matrix
from fwtsp.perm import Permutation, compose, decompose, inverse, is_tour, permutation_cost, random_tour
from fwtsp.tour import (
    EXHAUSTED,
    OPTIMAL,
    BoundState,
    Phase3Params,
    choose_roots,
    ctree_search,
    improve_by_products,
    initial_tour,
    phase3_run,
)


def worked_trace(m):
    trace = phase1_run(m, example1.start_tour(), Phase1Params.for_size(8, math.e))
    return trace, phase2_run(m, trace).perm


def test_initial_tour_worked_example(m):
    trace, ap = worked_trace(m)
    b = initial_tour(trace, ap, m, restarts=0, rng=random.Random(0))
    assert b.best_tour == Permutation.from_row([4, 3, 1, 8, 7, 5, 2, 6])
    assert b.best_value == 161 and b.m == 6 and b.history == [6]
    assert b.best_tour == compose(trace.derangements[2], Permutation.from_cycle([6, 1, 3, 8, 7, 4], 8))


def test_assignment_already_a_tour():
    n = 5
    rows = [[None if i == j else (1 if j == (i + 1) % n else 9) for j in range(n)] for i in range(n)]
    m = CostMatrix.from_rows(rows)
    trace = phase1_run(m, Permutation.from_cycle([1, 3, 5, 2, 4]))
    ap = phase2_run(m, trace).perm
    res = phase3_run(m, trace, ap)
    assert res.bounds.best_value == 5 and res.bounds.m == 0
    assert res.certificate == OPTIMAL and res.ctree is None


def test_initial_tour_never_beats_optimum():
    rng = random.Random(4)
    for _ in range(10):
        m = random_matrix(9, 1, 100, rng)
        trace = phase1_run(m, random_tour(9, rng))
        ap = phase2_run(m, trace).perm
        b = initial_tour(trace, ap, m, restarts=3, rng=rng)
        assert is_tour(b.best_tour)
        assert b.best_value == permutation_cost(b.best_tour, m) >= oracles.held_karp_tsp(m).optimum


def test_products_with_nothing_to_combine(m, d3):
    tour = Permutation.from_row([4, 3, 1, 8, 7, 5, 2, 6])
    b = BoundState(tour, 161, 155, [6])
    stats = improve_by_products(b, [], d3, m, cap=3)
    assert b.best_value == 161 and stats.nodes == 0


def test_worked_example_bound_six_has_no_cycles(m, d3):
    r = ReducedMatrix(m, d3)
    tree = ctree_search(r, 6, choose_roots(r, 6, []))
    assert tree.cycles == [] and tree.complete
    assert ctree_search(r, 0, [1, 2]).cycles == []


def planted_three_cycle_instance():
    """Assignment (1 2)(3 4)(5 6 7) at cost 7; the tour (1 2 3 4 5 6 7)
    needs three extra arcs of cost 5."""
    n = 7
    sigma = Permutation.from_cycles([[1, 2], [3, 4], [5, 6, 7]], n)
    tour = Permutation.from_cycle(list(range(1, 8)))
    rows = [[None if i == j else 100 for j in range(n)] for i in range(n)]
    for i in range(1, n + 1):
        rows[i - 1][sigma(i) - 1] = 1
    for a, b in [(2, 3), (4, 5), (7, 1)]:
        rows[a - 1][b - 1] = 5
    return CostMatrix.from_rows(rows), sigma, tour


def test_products_merge_planted_cycles():
    m, sigma, tour = planted_three_cycle_instance()
    r = ReducedMatrix(m, sigma)
    s = compose(inverse(sigma), tour)
    cycles = [make_candidate(c, r) for c in decompose(s).cycles]
    start = Permutation.from_cycle([1, 3, 5, 7, 2, 4, 6])
    b = BoundState(start, permutation_cost(start, m), 7, [])
    improve_by_products(b, cycles, sigma, m, cap=3)
    assert b.best_tour == tour and b.best_value == 19 == oracles.held_karp_tsp(m).optimum
    assert b.m == 12


def test_ctree_matches_oracle_enumeration():
    rng = random.Random(12)
    for _ in range(20):
        m = random_matrix(8, 1, 100, rng)
        trace = phase1_run(m, random_tour(8, rng))
        ap = phase2_run(m, trace).perm
        r = ReducedMatrix(m, ap)
        bound = rng.randint(10, 80)
        tree = ctree_search(r, bound, choose_roots(r, bound, []))
        truth = oracles.enumerate_cycles_upto(r, bound)
        assert tree.complete
        assert sorted((c.canonical, c.total) for c in tree.cycles) == sorted(truth)


def test_node_budget_marks_result_unproven():
    rng = random.Random(3)
    m = random_matrix(10, 1, 100, rng)
    trace = phase1_run(m, random_tour(10, rng))
    ap = phase2_run(m, trace).perm
    res = phase3_run(m, trace, ap, Phase3Params(node_budget=1))
    if res.bounds.m > 0 and res.ctree.nodes > 1:
        assert res.certificate == EXHAUSTED and not res.ctree.complete
    assert res.bounds.best_value >= oracles.held_karp_tsp(m).optimum


def test_binding_product_cap_marks_result_unproven():
    # Assignment (1 2)(3 4)(5 6); the only cheap repair needs both
    # transpositions (1 3) and (2 5) at once.
    n = 6
    sigma = Permutation.from_cycles([[1, 2], [3, 4], [5, 6]], n)
    s = Permutation.from_cycles([[1, 3], [2, 5]], n)
    tour = compose(sigma, s)
    assert is_tour(tour)
    rows = [[None if i == j else 100 for j in range(n)] for i in range(n)]
    for i in range(1, n + 1):
        rows[i - 1][sigma(i) - 1] = 1
        if tour(i) != sigma(i):
            rows[i - 1][tour(i) - 1] = 5
    m = CostMatrix.from_rows(rows)
    r = ReducedMatrix(m, sigma)
    cycles = [make_candidate([1, 3], r), make_candidate([2, 5], r)]
    start = Permutation.from_cycle([1, 3, 5, 2, 4, 6])
    b = BoundState(start, permutation_cost(start, m), 6, [])
    stats = improve_by_products(b, cycles, sigma, m, cap=1)
    assert stats.cap_binding and b.best_tour == start
    stats = improve_by_products(b, cycles, sigma, m, cap=2)
    assert not stats.cap_binding and b.best_tour == tour and b.best_value == 22


def test_bound_history_is_decreasing():
    rng = random.Random(77)
    for _ in range(15):
        m = random_matrix(9, 1, 100, rng)
        trace = phase1_run(m, random_tour(9, rng))
        ap = phase2_run(m, trace).perm
        res = phase3_run(m, trace, ap, rng=random.Random(1))
        h = res.bounds.history
        assert all(a > b for a, b in zip(h, h[1:]))
        assert res.bounds.m == res.bounds.best_value - permutation_cost(ap, m)
        if res.certificate == OPTIMAL:
            assert res.bounds.best_value == oracles.held_karp_tsp(m).optimum


@pytest.mark.parametrize("backend", ["python", "compiled"])
def test_ctree_backends_agree(backend):
    from fwtsp import kernels

    if backend not in kernels.BACKENDS:
        pytest.skip("compiled kernels not built")
    rng = random.Random(5)
    m = random_matrix(9, 1, 100, rng)
    trace = phase1_run(m, random_tour(9, rng))
    r = ReducedMatrix(m, phase2_run(m, trace).perm)
    roots = choose_roots(r, 60, [])
    a = ctree_search(r, 60, roots, backend=backend)
    b = ctree_search(r, 60, roots, backend="python")
    assert [c.vertices for c in a.cycles] == [c.vertices for c in b.cycles] and a.nodes == b.nodes
