import math
import random

import pytest

from fwtsp import example1
from fwtsp.greedy import Phase1Params, _Walker, admissible, greedy_walk, phase1_run
from fwtsp.matrix import CostMatrix, build_min_order, random_matrix
from fwtsp.perm import Permutation, is_derangement, permutation_cost, random_tour

D = Permutation.from_cycle([1, 2, 3, 4, 5, 6, 7, 8])
D1 = Permutation.from_row([2, 3, 4, 6, 7, 5, 8, 1])
D2 = Permutation.from_row([5, 3, 4, 2, 7, 8, 6, 1])


def walker(m, p, base=0):
    return _Walker(m, p, build_min_order(m), base)


def test_admissible_examples():
    assert not admissible([5, 6], D)
    assert admissible([5, 6, 4], D)
    assert not admissible([1, 2], Permutation.from_cycles([[1, 2], [3, 4]], 4))


def test_budgets_for_size():
    p = Phase1Params.for_size(8)
    assert (p.start_budget, p.rank_budget) == (3, 4)
    p = Phase1Params.for_size(8, math.e)
    assert (p.start_budget, p.rank_budget) == (3, 3)
    assert Phase1Params.for_size(16).start_budget == 4


def test_walk_from_5_on_start_tour(m):
    res = greedy_walk(5, 1, walker(m, D))
    assert res.path == [5, 6, 4, 1, 4]
    values = {mv.key: mv.total for mv in res.candidates}
    assert values[((4, 5, 6),)] == -22
    # the cut-off loop (4 1) is worth d(4,2)-d(4,5) + d(1,5)-d(1,2) = 1 - 11
    assert values[((1, 4),)] == -10
    assert str(next(mv for mv in res.candidates if mv.total == -22)) == "(5 6 4)"
    assert res.arcs[0] == "(5, 7) → (5, 6)  -30"


def test_walk_from_4_second_rank(m):
    res = greedy_walk(4, 2, walker(m, D1))
    assert res.path == [4, 1, 6, 7, 1]
    best = min(res.candidates, key=lambda mv: mv.sort_key())
    assert str(best) == "(4 1 6 7)" and best.total == -29


def test_walk_from_6_on_d2(m):
    res = greedy_walk(6, 1, walker(m, D2))
    assert res.path == [6, 1, 3, 8, 7, 4, 1]
    values = {mv.key: mv.total for mv in res.candidates}
    assert values[((1, 3, 8, 7, 6),)] == -7
    assert values[((1, 3, 8, 7, 4, 6),)] == -1


def test_walk_stops_on_assigned_or_nonnegative_column(m):
    assert greedy_walk(2, 1, walker(m, D)).path == [2]
    assert greedy_walk(2, 7, walker(m, D)).path == [2]


def test_phase1_worked_example(m):
    trace = phase1_run(m, example1.start_tour(), Phase1Params.for_size(8, math.e))
    assert [str(mv) for mv in trace.steps] == ["(5 6 4)", "(4 1 6 7)", "(6 1 3 8 7)"]
    assert [mv.total for mv in trace.steps] == [-22, -29, -7]
    assert trace.costs == [213, 191, 162, 155]
    assert trace.final == Permutation.from_row([4, 3, 1, 2, 7, 5, 8, 6])
    assert trace.diff_tables[0] == [-11, 0, -18, 0, -30, -23, -4, 0]
    assert trace.diff_tables[-1] == [-5, 0, 0, -1, 0, 0, -4, -18]


def test_phase1_no_improvement_when_tour_is_rowwise_cheapest():
    n = 6
    rows = [[None if i == j else (1 if j == (i + 1) % n else 50) for j in range(n)] for i in range(n)]
    trace = phase1_run(CostMatrix.from_rows(rows), Permutation.from_cycle(list(range(1, n + 1))))
    assert len(trace.derangements) == 1 and trace.steps == []


def test_phase1_rejects_non_tour(m):
    with pytest.raises(ValueError):
        phase1_run(m, Permutation.from_row([4, 3, 1, 2, 7, 5, 8, 6]))


@pytest.mark.parametrize("sweep_all", [False, True])
def test_phase1_random_properties(sweep_all):
    rng = random.Random(10)
    for _ in range(40):
        m = random_matrix(10, 1, 100, rng)
        d0 = random_tour(10, rng)
        trace = phase1_run(m, d0, Phase1Params.for_size(10, sweep_all_starts=sweep_all))
        costs = trace.costs
        assert all(a > b for a, b in zip(costs, costs[1:]))
        assert costs[-1] <= permutation_cost(d0, m)
        for p, c in zip(trace.derangements, costs):
            assert is_derangement(p) and permutation_cost(p, m) == c
        for step, before, after in zip(trace.steps, costs, costs[1:]):
            assert after - before == step.total
        for mv in trace.bag:
            base = trace.derangements[mv.base]
            for cy in mv.cycles:
                assert all(s < 0 for s in cy.partial_sums)
                assert admissible(cy.vertices, base)
