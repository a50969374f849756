"""Permutations on {1..n} in row form and cycle form.

All public functions speak 1-based vertices. Internally ``Permutation.map``
is a tuple indexed from 0, holding 1-based images (``map[i - 1] = p(i)``).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Permutation:
    map: tuple[int, ...]
    # Traversal order of the generating n-cycle, only set by from_cycle().
    positions: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.map)
        if sorted(self.map) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.map}")

    @property
    def n(self) -> int:
        return len(self.map)

    def __call__(self, i: int) -> int:
        return self.map[i - 1]

    def __len__(self) -> int:
        return len(self.map)

    def __str__(self) -> str:
        return format_cycles(self)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_row(cls, row: Iterable[int]) -> Permutation:
        return cls(tuple(int(x) for x in row))

    @classmethod
    def from_cycle(cls, order: Sequence[int], n: int | None = None) -> Permutation:
        """The cycle a_1 -> a_2 -> ... -> a_k -> a_1; other points fixed.

        When ``order`` covers all of 1..n, ``positions`` records
        ``positions[a_i - 1] = i``.
        """
        if n is None:
            n = max(order)
        row = list(range(1, n + 1))
        k = len(order)
        if len(set(order)) != k:
            raise ValueError(f"repeated vertex in cycle {tuple(order)}")
        for idx, a in enumerate(order):
            row[a - 1] = order[(idx + 1) % k]
        positions = None
        if k == n:
            pos = [0] * n
            for idx, a in enumerate(order):
                pos[a - 1] = idx + 1
            positions = tuple(pos)
        return cls(tuple(row), positions)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> Permutation:
        row = list(range(1, n + 1))
        seen: set[int] = set()
        for cyc in cycles:
            if seen.intersection(cyc) or len(set(cyc)) != len(cyc):
                raise ValueError("cycles are not disjoint")
            seen.update(cyc)
            for idx, a in enumerate(cyc):
                row[a - 1] = cyc[(idx + 1) % len(cyc)]
        return cls(tuple(row))

    def ord_inverse(self, i: int) -> int:
        """a_i, the i-th vertex of the generating n-cycle."""
        if self.positions is None:
            raise ValueError("permutation was not built from an n-cycle")
        return self.positions.index(i) + 1


@dataclass(frozen=True)
class CycleForm:
    cycles: tuple[tuple[int, ...], ...]
    fixed_points: tuple[int, ...]


def compose(p: Permutation, q: Permutation) -> Permutation:
    """r(i) = p(q(i)); q is applied first."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} != {q.n}")
    pm = p.map
    return Permutation(tuple(pm[x - 1] for x in q.map))


def inverse(p: Permutation) -> Permutation:
    row = [0] * p.n
    for i, x in enumerate(p.map, start=1):
        row[x - 1] = i
    return Permutation(tuple(row))


def canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate so the smallest vertex comes first."""
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


def decompose(p: Permutation) -> CycleForm:
    seen = [False] * (p.n + 1)
    cycles = []
    fixed = []
    for start in range(1, p.n + 1):
        if seen[start]:
            continue
        cyc = []
        v = start
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = p(v)
        if len(cyc) == 1:
            fixed.append(start)
        else:
            cycles.append(tuple(cyc))
    return CycleForm(tuple(cycles), tuple(fixed))


def cycle_product(cycles: Iterable[Sequence[int]], n: int) -> Permutation:
    """Product of pairwise disjoint cycles."""
    return Permutation.from_cycles(cycles, n)


def is_derangement(p: Permutation) -> bool:
    return all(x != i for i, x in enumerate(p.map, start=1))


def is_tour(p: Permutation) -> bool:
    if p.n < 2:
        return False
    v, steps = p(1), 1
    while v != 1:
        v = p(v)
        steps += 1
    return steps == p.n


def permutation_cost(p: Permutation, m) -> int | float:
    """Sum of m[i, p(i)]; ``math.inf`` if any arc is missing."""
    if p.n != m.n:
        raise ValueError(f"size mismatch: {p.n} != {m.n}")
    d = m.d
    total = 0
    for i, x in enumerate(p.map):
        total += d[i][x - 1]
    return total


def random_tour(n: int, rng: random.Random) -> Permutation:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    return Permutation.from_cycle(order, n)


def format_cycle(cycle: Sequence[int]) -> str:
    return "(" + " ".join(str(v) for v in cycle) + ")"


def format_cycles(p: Permutation) -> str:
    """Cycle notation, cycles led by their smallest vertex; "()" for identity."""
    form = decompose(p)
    if not form.cycles:
        return "()"
    return "".join(format_cycle(c) for c in form.cycles)


def format_row(p: Permutation) -> str:
    return " ".join(str(x) for x in p.map)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse "(1 4 2 3)(5 7 8 6)". ``n`` defaults to the largest vertex named."""
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty cycle notation")
    leftover = _CYCLE_RE.sub("", stripped).strip()
    if leftover:
        raise ValueError(f"unexpected text in cycle notation: {leftover!r}")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        tokens = body.replace(",", " ").split()
        if tokens:
            cycles.append([int(t) for t in tokens])
    largest = max((max(c) for c in cycles), default=0)
    if n is None:
        n = largest
    if largest > n or any(v < 1 for c in cycles for v in c):
        raise ValueError(f"vertex out of range 1..{n}")
    return Permutation.from_cycles([c for c in cycles if len(c) > 1], n)
