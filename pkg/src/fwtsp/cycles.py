"""Cycle candidates and closed-walk splitting shared by all three phases."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Sequence

from .perm import canonical_cycle, format_cycle


@dataclass(frozen=True)
class CycleCandidate:
    """A simple cycle with its per-arc values under some weight matrix.

    ``arc_values[t]`` is the value of the arc leaving ``vertices[t]``.
    """

    vertices: tuple[int, ...]
    arc_values: tuple
    partial_sums: tuple
    total: int | float

    @property
    def canonical(self) -> tuple[int, ...]:
        return canonical_cycle(self.vertices)

    @property
    def mask(self) -> int:
        out = 0
        for v in self.vertices:
            out |= 1 << v
        return out

    def __len__(self) -> int:
        return len(self.vertices)

    def __str__(self) -> str:
        return format_cycle(self.vertices)

    def rotated(self, k: int) -> CycleCandidate:
        verts = self.vertices[k:] + self.vertices[:k]
        vals = self.arc_values[k:] + self.arc_values[:k]
        return CycleCandidate(verts, vals, tuple(accumulate(vals)), self.total)

    def sort_key(self):
        return (self.total, len(self.vertices), self.canonical)


def make_candidate(vertices: Sequence[int], r) -> CycleCandidate:
    """Read arc values for the closed cycle ``vertices`` (1-based) from r."""
    w = r.r
    k = len(vertices)
    vals = tuple(w[vertices[t] - 1][vertices[(t + 1) % k] - 1] for t in range(k))
    return CycleCandidate(tuple(vertices), vals, tuple(accumulate(vals)), sum(vals))


def determining_rotation(c: CycleCandidate) -> CycleCandidate:
    """Rotate c so that every partial sum is at most its total, strictly
    negative when the total is negative. The given rotation is kept when it
    already qualifies.

    Starting just after the last maximum of the prefix sums does it.
    """
    ps = c.partial_sums
    if c.total < 0:
        if all(s < 0 for s in ps):
            return c
    elif all(s <= c.total for s in ps):
        return c
    prefix = (0,) + ps[:-1]
    best = max(prefix)
    last = max(t for t, s in enumerate(prefix) if s == best)
    return c.rotated(last)


def split_walk(walk: Sequence[int]) -> tuple[list[int], list[list[int]]]:
    """Split a walk into a simple residual path and the simple cycles cut from it.

    Cycles come out in the order they close. For a closed walk (first vertex
    equal to last) the residual is the lone start vertex and every arc lands
    in some cycle. Arc multisets are preserved, so values add up.
    """
    stack: list[int] = []
    pos: dict[int, int] = {}
    loops: list[list[int]] = []
    for v in walk:
        idx = pos.get(v)
        if idx is None:
            pos[v] = len(stack)
            stack.append(v)
            continue
        loop = stack[idx:]
        for u in stack[idx + 1:]:
            del pos[u]
        del stack[idx + 1:]
        if len(loop) > 1:
            loops.append(loop)
    return stack, loops
