"""Instance builders shared by the test modules."""

import random

from fwtsp.matrix import INF, ReducedMatrix, WeightMatrix, random_matrix
from fwtsp.perm import random_tour

PLANTED_ARCS = [
    (1, 3, -20), (3, 7, 5), (7, 13, -5), (13, 15, 12), (15, 19, 1),
    (19, 20, 3), (20, 18, -18), (18, 14, 1), (14, 6, 1), (6, 7, 3),
]
PLANTED_CYCLE = (20, 18, 14, 6, 7, 13, 15, 19)


def sparse(n, arcs):
    rows = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for a, b, v in arcs:
        rows[a - 1][b - 1] = v
    return WeightMatrix(rows)


def planted_instance():
    return sparse(20, PLANTED_ARCS)


def random_reduced(rng: random.Random, n: int, low=1, high=100):
    """Reduced matrix of a random instance under a random tour."""
    m = random_matrix(n, low, high, rng)
    return ReducedMatrix(m, random_tour(n, rng))


def potential_shifted(rng: random.Random, n: int):
    """Negative arcs but no negative cycle: nonnegative costs plus a potential."""
    pot = [rng.randint(-50, 50) for _ in range(n)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(0)
            elif rng.random() < 0.15:
                row.append(INF)
            else:
                row.append(rng.randint(0, 30) + pot[i] - pot[j])
        rows.append(row)
    return WeightMatrix(rows)
