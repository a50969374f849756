"""The 8-vertex worked instance, its start tour, and the frozen golden trace."""

from __future__ import annotations

from .matrix import CostMatrix
from .perm import Permutation

ROWS = [
    [None, 23, 99, 17, 12, 99, 18, 24],
    [43, None, 2, 73, 15, 100, 53, 28],
    [1, 84, None, 19, 53, 68, 44, 34],
    [89, 41, 45, None, 40, 71, 79, 51],
    [83, 62, 94, 88, None, 36, 6, 50],
    [61, 62, 98, 50, 29, None, 52, 40],
    [50, 21, 53, 68, 39, 26, None, 25],
    [16, 42, 61, 54, 81, 34, 92, None],
]


def matrix() -> CostMatrix:
    return CostMatrix.from_rows(ROWS)


def start_tour() -> Permutation:
    return Permutation.from_cycle([1, 2, 3, 4, 5, 6, 7, 8])


# Summary lines the replay must reproduce exactly, in order. Row 8 of the
# last DIFF table is -18 (d(8,1) - d(8,6) = 16 - 34); the -15 printed in
# the worked row-form table disagrees with its own arithmetic.
GOLDEN = [
    "D0 = 2 3 4 5 6 7 8 1 cost 213",
    "DIFF -11 0 -18 0 -30 -23 -4 0",
    "APPLY (5 6 4) -22",
    "D1 = 2 3 4 6 7 5 8 1 cost 191",
    "DIFF -11 0 -18 -31 0 0 -4 0",
    "APPLY (4 1 6 7) -29",
    "D2 = 5 3 4 2 7 8 6 1 cost 162",
    "DIFF 0 0 -18 -1 0 -11 -5 0",
    "APPLY (6 1 3 8 7) -7",
    "D3 = 4 3 1 2 7 5 8 6 cost 155",
    "DIFF -5 0 0 -1 0 0 -4 -18",
    "PHASE1 END (1 4 2 3)(5 7 8 6) 155",
    "NEGPATH [7, 4, 6] -5",
    "APOPT (1 4 2 3)(5 7 8 6) 155",
    "TOUR0 (1 4 8 6 5 7 2 3) 161",
    "M0 6",
    "BOUNDED none",
    "TSPOPT (1 4 8 6 5 7 2 3) 161",
    "CERT optimal-proven",
]

# Walks spelled out in the worked trials; they must appear in this order
# among the emitted "P = [...]" lines.
GOLDEN_WALKS = [
    "P = [5, 6, 4, 1, 4]",
    "P = [4, 6, 7, 1, 6]",
    "P = [4, 1, 6, 7, 1]",
    "P = [4, 2, 6, 7, 1, 6]",
    "P = [6, 1, 3, 8, 7, 4, 1]",
]
