from hypothesis import given, strategies as st

from fwtsp.cycles import CycleCandidate, determining_rotation, split_walk
from itertools import accumulate


def cand(vals):
    vals = tuple(vals)
    return CycleCandidate(tuple(range(1, len(vals) + 1)), vals, tuple(accumulate(vals)), sum(vals))


def test_split_walk_examples():
    assert split_walk([5, 6, 4, 1, 4]) == ([5, 6, 4], [[4, 1]])
    assert split_walk([1, 2, 3, 1]) == ([1], [[1, 2, 3]])
    assert split_walk([1, 2, 3]) == ([1, 2, 3], [])


@given(st.lists(st.integers(1, 6), min_size=1, max_size=30))
def test_split_walk_preserves_arcs(walk):
    walk = [v for t, v in enumerate(walk) if t == 0 or v != walk[t - 1]]
    residual, loops = split_walk(walk)
    assert len(set(residual)) == len(residual)
    assert residual[0] == walk[0] and residual[-1] == walk[-1]
    arcs = sorted(zip(walk, walk[1:]))
    parts = list(zip(residual, residual[1:]))
    for loop in loops:
        assert len(set(loop)) == len(loop) >= 2
        parts += list(zip(loop, loop[1:] + loop[:1]))
    assert sorted(parts) == arcs


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=12))
def test_determining_rotation(vals):
    c = determining_rotation(cand(vals))
    assert sorted(c.arc_values) == sorted(vals) and c.total == sum(vals)
    if c.total < 0:
        assert all(s < 0 for s in c.partial_sums)
    else:
        assert all(s <= c.total for s in c.partial_sums)
