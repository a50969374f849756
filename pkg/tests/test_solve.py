import random

from fwtsp import oracles
from fwtsp.matrix import CostMatrix, random_matrix
from fwtsp.solve import SolveConfig, replay_config, replay_example1, solve, with_big_m


def test_missing_arcs_handled_by_big_m():
    rng = random.Random(6)
    for _ in range(10):
        n = 7
        rows = [[None if i == j or rng.random() < 0.3 else rng.randint(1, 50) for j in range(n)] for i in range(n)]
        m = CostMatrix.from_rows(rows)
        res = solve(m, SolveConfig(seed=1, oracle_check=True))
        assert res.ok, res.lines[-3:]
        hk = oracles.held_karp_tsp(m).optimum
        assert res.report["phase3"]["feasible"] == (hk != float("inf"))


def test_big_m_leaves_complete_matrix_alone(m):
    assert with_big_m(m) == (m, None)


def test_reports_repeat_exactly():
    m = random_matrix(9, 1, 100, random.Random(8))
    a = solve(m, SolveConfig(seed=3)).to_json()
    b = solve(m, SolveConfig(seed=3)).to_json()
    assert a == b
    assert solve(m, SolveConfig(seed=4)).report["phase1"]["start"] != solve(m, SolveConfig(seed=3)).report["phase1"]["start"]


def test_replay_defaults_and_knobs():
    assert replay_example1().ok
    bad = replay_example1(replay_config(rank_budget=1))
    assert not bad.ok and bad.mismatch.startswith("line 6")
