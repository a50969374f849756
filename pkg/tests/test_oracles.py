import random

import pytest
from hypothesis import given, strategies as st

from fwtsp import oracles
from fwtsp.matrix import CostMatrix, ReducedMatrix, random_matrix
from fwtsp.perm import Permutation, format_cycles

from helpers import sparse


def test_assignment_oracles_on_worked_instance(m):
    for fn in (oracles.brute_ap, oracles.factorial_ap, oracles.hungarian_ap):
        rep = fn(m)
        assert rep.optimum == 155
        assert format_cycles(rep.optimizer) == "(1 4 2 3)(5 7 8 6)"


def test_assignment_two_by_two():
    m = CostMatrix.from_rows([[None, 4], [9, None]])
    rep = oracles.brute_ap(m)
    assert rep.optimum == 13 and rep.optimizer == Permutation.from_cycle([1, 2])


def test_brute_ap_agrees_with_hungarian():
    rng = random.Random(1)
    for _ in range(100):
        m = random_matrix(rng.randint(5, 9), 1, 100, rng)
        assert oracles.brute_ap(m).optimum == oracles.hungarian_ap(m).optimum


def test_tour_oracles_on_worked_instance(m):
    rep = oracles.held_karp_tsp(m)
    assert rep.optimum == 161 == oracles.brute_tsp(m).optimum
    assert format_cycles(rep.optimizer) == "(1 4 8 6 5 7 2 3)"


def test_symmetric_triangle_tour():
    m = CostMatrix.from_rows([[None, 2, 3], [2, None, 4], [3, 4, None]])
    assert oracles.held_karp_tsp(m).optimum == 9


def test_held_karp_agrees_with_enumeration():
    rng = random.Random(2)
    for n in [4, 5, 6, 7, 8, 9, 9]:
        m = random_matrix(n, 1, 100, rng)
        assert oracles.held_karp_tsp(m).optimum == oracles.brute_tsp(m).optimum


def test_size_gates_refuse():
    big = random_matrix(11, 1, 5, random.Random(0))
    with pytest.raises(oracles.OracleSizeError):
        oracles.brute_ap(big)
    with pytest.raises(oracles.OracleSizeError):
        oracles.held_karp_tsp(random_matrix(16, 1, 5, random.Random(0)))


def test_bellman_ford_on_triangle_example():
    arcs = [(1, 3, 5), (3, 7, -2), (1, 7, 25), (7, 10, -5), (1, 10, 7)]
    dist, flag = oracles.bellman_ford(sparse(10, arcs), 1)
    assert dist[9] == -2 and not flag
    assert oracles.bellman_ford(sparse(10, arcs + [(10, 1, 1)]))[1]
    assert not oracles.bellman_ford(sparse(3, [(1, 2, 1), (2, 3, 1), (3, 1, 1)]))[1]


def test_bellman_ford_finds_no_cycle_at_assignment_optimum(m, d3):
    assert not oracles.bellman_ford(ReducedMatrix(m, d3))[1]


def test_cycle_enumeration_small():
    w = sparse(3, [(1, 2, 1), (2, 1, 2), (2, 3, 1), (3, 1, 1)])
    assert oracles.enumerate_cycles_upto(w, 10) == [((1, 2), 3), ((1, 2, 3), 3)]
    assert oracles.enumerate_cycles_upto(w, 3) == []


def test_rotation_check_examples():
    assert oracles.theorem1_check([-30, -23, 31]) == 0
    assert oracles.theorem1_check([1, -1]) is None
    with pytest.raises(ValueError):
        oracles.theorem1_check([])


@given(st.lists(st.integers(-100, 100), min_size=2, max_size=12))
def test_rotation_exists_for_negative_totals(ws):
    k = oracles.theorem1_check(ws)
    if sum(ws) < 0:
        assert k is not None
    if k is not None:
        acc = 0
        for t in range(len(ws)):
            acc += ws[(k + t) % len(ws)]
            assert acc < 0
