"""Cost matrices, per-row cost orderings, and matrices reduced by a derangement.

Costs are Python ints; a missing arc (and every diagonal entry) is
``math.inf``, which absorbs addition and compares above every int.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .perm import Permutation

INF = math.inf
# Stand-in for INF inside int64 arrays handed to the compiled kernels.
INF64 = 2**62


class MatrixFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class CostMatrix:
    n: int
    d: tuple[tuple[int | float, ...], ...]

    def __post_init__(self):
        if len(self.d) != self.n or any(len(row) != self.n for row in self.d):
            raise ValueError(f"matrix is not {self.n}x{self.n}")
        for i in range(self.n):
            if self.d[i][i] != INF:
                raise ValueError(f"diagonal entry ({i + 1}, {i + 1}) must be infinite")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | float | None]]) -> CostMatrix:
        """Build from nested rows; ``None`` or ``inf`` marks a missing arc.

        The diagonal is forced to infinity.
        """
        n = len(rows)
        d = []
        for i, row in enumerate(rows):
            out = []
            for j, x in enumerate(row):
                if i == j or x is None or x == INF:
                    out.append(INF)
                else:
                    if x != int(x):
                        raise ValueError(f"non-integer cost at ({i + 1}, {j + 1}): {x}")
                    out.append(int(x))
            d.append(tuple(out))
        return cls(n, tuple(d))

    def __getitem__(self, ij: tuple[int, int]) -> int | float:
        i, j = ij
        return self.d[i - 1][j - 1]

    def max_finite(self) -> int:
        return max((x for row in self.d for x in row if x != INF), default=0)

    def with_row_shift(self, i: int, c: int) -> CostMatrix:
        rows = [list(r) for r in self.d]
        rows[i - 1] = [x + c for x in rows[i - 1]]
        return CostMatrix(self.n, tuple(tuple(r) for r in rows))

    def to_array(self) -> np.ndarray:
        a = np.empty((self.n, self.n), dtype=np.int64)
        for i, row in enumerate(self.d):
            a[i] = [INF64 if x == INF else x for x in row]
        return a


def random_matrix(n: int, low: int, high: int, rng: random.Random) -> CostMatrix:
    rows = [[None if i == j else rng.randint(low, high) for j in range(n)] for i in range(n)]
    return CostMatrix.from_rows(rows)


# --- text format -----------------------------------------------------------


def format_matrix(m: CostMatrix) -> str:
    lines = [str(m.n)]
    for row in m.d:
        lines.append(" ".join("INF" if x == INF else str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> CostMatrix:
    lines = [(no, ln) for no, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty file")
    first_no, first = lines[0]
    try:
        n = int(first.strip())
    except ValueError:
        raise MatrixFormatError(f"expected vertex count, got {first.strip()!r}", first_no) from None
    if n < 2:
        raise MatrixFormatError(f"vertex count must be at least 2, got {n}", first_no)
    body = lines[1:]
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} matrix rows, found {len(body)}")
    rows = []
    for i, (no, ln) in enumerate(body):
        tokens = ln.split()
        if len(tokens) != n:
            raise MatrixFormatError(f"expected {n} entries, found {len(tokens)}", no)
        row = []
        for j, tok in enumerate(tokens):
            if tok.upper() == "INF":
                row.append(INF)
                continue
            if i == j:
                raise MatrixFormatError(f"diagonal entry must be INF, got {tok!r}", no, j + 1)
            try:
                row.append(int(tok))
            except ValueError:
                raise MatrixFormatError(f"bad entry {tok!r}", no, j + 1) from None
        rows.append(tuple(row))
    return CostMatrix(n, tuple(rows))


def load_matrix(path: str | Path) -> CostMatrix:
    return parse_matrix(Path(path).read_text())


def save_matrix(m: CostMatrix, path: str | Path) -> None:
    Path(path).write_text(format_matrix(m))


# --- MIN(M) ----------------------------------------------------------------


@dataclass(frozen=True)
class MinOrderTable:
    """Per-row off-diagonal columns sorted by ascending cost, ties by column."""

    order: tuple[tuple[int, ...], ...]
    rank: tuple[dict[int, int], ...]

    def ordinal(self, i: int, j: int) -> int:
        """1-based position of column j in row i's ordering."""
        return self.rank[i - 1][j] + 1

    def column(self, i: int, k: int) -> int:
        """MIN(M)(i, k): the column with the k-th smallest cost in row i."""
        return self.order[i - 1][k - 1]


def build_min_order(m: CostMatrix) -> MinOrderTable:
    if m.n < 2:
        raise ValueError("need at least two vertices")
    order = []
    rank = []
    for i in range(m.n):
        row = m.d[i]
        cols = sorted((j for j in range(m.n) if j != i), key=lambda j: (row[j], j))
        order.append(tuple(j + 1 for j in cols))
        rank.append({j + 1: k for k, j in enumerate(cols)})
    return MinOrderTable(tuple(order), tuple(rank))


# --- reduced matrix --------------------------------------------------------


def reduced_value(m: CostMatrix, p: Permutation, i: int, j: int) -> int | float:
    """d[i, p(j)] - d[i, p(i)]."""
    here = m.d[i - 1][p(i) - 1]
    if here == INF:
        raise ValueError(f"row {i} is assigned a missing arc; reduction undefined")
    return m.d[i - 1][p(j) - 1] - here


def reduced_cycle_value(c: Sequence[int], p: Permutation, m: CostMatrix) -> int | float:
    """Sum of reduced values along the closed cycle c."""
    k = len(c)
    return sum(reduced_value(m, p, c[t], c[(t + 1) % k]) for t in range(k))


class ReducedMatrix:
    """The matrix with entries d[i, p(j)] - d[i, p(i)]: zero diagonal, and the
    arc (i, p^-1(i)) infinite because it lands on d[i, i]."""

    def __init__(self, base: CostMatrix, perm: Permutation):
        if base.n != perm.n:
            raise ValueError(f"size mismatch: {base.n} != {perm.n}")
        self.base = base
        self.perm = perm
        n = base.n
        d = base.d
        rows = []
        for i in range(n):
            here = d[i][perm.map[i] - 1]
            if here == INF:
                raise ValueError(f"row {i + 1} is assigned a missing arc; reduction undefined")
            rows.append(tuple(d[i][perm.map[j] - 1] - here for j in range(n)))
        self.r = tuple(rows)
        self.n = n

    def __getitem__(self, ij: tuple[int, int]) -> int | float:
        i, j = ij
        return self.r[i - 1][j - 1]

    def cycle_value(self, c: Sequence[int]) -> int | float:
        k = len(c)
        return sum(self.r[c[t] - 1][c[(t + 1) % k] - 1] for t in range(k))

    def to_array(self) -> np.ndarray:
        a = np.empty((self.n, self.n), dtype=np.int64)
        for i, row in enumerate(self.r):
            a[i] = [INF64 if x == INF else x for x in row]
        return a

    def negative_entries(self) -> list[tuple[int, int, int]]:
        return [
            (i + 1, j + 1, x)
            for i, row in enumerate(self.r)
            for j, x in enumerate(row)
            if x < 0
        ]


class WeightMatrix:
    """A bare square weight matrix with the ReducedMatrix read interface.

    Used for planted instances and oracle cross-checks where no underlying
    derangement exists.
    """

    def __init__(self, rows: Sequence[Sequence[int | float]]):
        self.n = len(rows)
        self.r = tuple(tuple(INF if x is None else x for x in row) for row in rows)
        self.base = None
        self.perm = None

    __getitem__ = ReducedMatrix.__getitem__
    cycle_value = ReducedMatrix.cycle_value
    to_array = ReducedMatrix.to_array
    negative_entries = ReducedMatrix.negative_entries


def diff(m: CostMatrix, p: Permutation, min_order: MinOrderTable, i: int) -> tuple[int | float, int | None]:
    """Best single-arc change for row i: d(i, best) - d(i, p(i)) with its column.

    The column is None when the cheapest column already is p(i); the value is
    then 0.
    """
    first = min_order.order[i - 1][0]
    here = m.d[i - 1][p(i) - 1]
    if first == p(i):
        return 0, None
    return m.d[i - 1][first - 1] - here, first


def diff_table(m: CostMatrix, p: Permutation, min_order: MinOrderTable) -> list[int | float]:
    return [diff(m, p, min_order, i)[0] for i in range(1, m.n + 1)]


def format_reduced_table(values: Sequence[Sequence[int | float]], perm: Permutation) -> str:
    """Print a working matrix the way the worked tables lay it out: a header of
    p(j) over j, then one labelled row per vertex."""
    n = len(values)
    width = 5

    def cell(x) -> str:
        return ("∞" if x == INF else str(x)).rjust(width)

    head1 = " " * 3 + "".join(str(perm(j)).rjust(width) for j in range(1, n + 1))
    head2 = " " * 3 + "".join(str(j).rjust(width) for j in range(1, n + 1))
    lines = [head1, head2]
    for i, row in enumerate(values, start=1):
        lines.append(str(i).rjust(3) + "".join(cell(x) for x in row))
    return "\n".join(lines)

