"""Fixpoint evaluation over finite Kripke frames.

Sorts index both the accessibility relations (one box/diamond pair per sort)
and the propositions that hold where a world carries a label of that sort.
World sets are bit masks over the frame's world order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .errors import NonStabilizationError, SignatureError


@dataclass(frozen=True)
class KripkeFrame:
    worlds: tuple
    sorts: tuple
    relations: dict = field(default_factory=dict)   # sort -> set of (world, world)
    valuation: dict = field(default_factory=dict)   # sort -> set of worlds

    def __post_init__(self):
        worlds = tuple(self.worlds)
        if len(set(worlds)) != len(worlds):
            raise ValueError("duplicate world")
        sorts = tuple(self.sorts)
        known = set(worlds)
        rel = {s: frozenset(self.relations.get(s, ())) for s in sorts}
        val = {s: frozenset(self.valuation.get(s, ())) for s in sorts}
        for s in set(self.relations) | set(self.valuation):
            if s not in sorts:
                raise SignatureError(f"unknown sort {s!r}")
        for s in sorts:
            for u, v in rel[s]:
                if u not in known or v not in known:
                    raise ValueError(f"relation {s!r} mentions unknown world in {(u, v)!r}")
            if not val[s] <= known:
                raise ValueError(f"valuation {s!r} mentions unknown worlds")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "sorts", sorts)
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "valuation", val)
        index = {w: k for k, w in enumerate(worlds)}
        object.__setattr__(self, "_index", index)
        # successor masks per sort, per world
        succ = {s: [0] * len(worlds) for s in sorts}
        for s in sorts:
            for u, v in rel[s]:
                succ[s][index[u]] |= 1 << index[v]
        object.__setattr__(self, "_succ", {s: tuple(m) for s, m in succ.items()})

    @property
    def top(self) -> int:
        return (1 << len(self.worlds)) - 1

    def mask(self, worlds: Iterable) -> int:
        m = 0
        for w in worlds:
            m |= 1 << self._index[w]
        return m

    def names(self, mask: int) -> list:
        return [w for k, w in enumerate(self.worlds) if mask >> k & 1]

    def val(self, sort) -> int:
        return self.mask(self.valuation[self._sort(sort)])

    def _sort(self, sort):
        if sort not in self._succ:
            raise SignatureError(f"unknown sort {sort!r}")
        return sort


def box(frame: KripkeFrame, sort, s: int) -> int:
    """Worlds all of whose ``sort``-successors lie in ``s``."""
    succ = frame._succ[frame._sort(sort)]
    out = 0
    for k, m in enumerate(succ):
        if m & ~s == 0:
            out |= 1 << k
    return out


def dia(frame: KripkeFrame, sort, s: int) -> int:
    """Worlds with some ``sort``-successor in ``s``."""
    succ = frame._succ[frame._sort(sort)]
    out = 0
    for k, m in enumerate(succ):
        if m & s:
            out |= 1 << k
    return out


def _iterate(frame, op, start):
    x = start
    for _ in range(len(frame.worlds) + 1):
        y = op(x)
        if y == x:
            return x
        x = y
    raise NonStabilizationError(
        f"no fixpoint after {len(frame.worlds) + 1} iterations; operator is not monotone")


def gfp(frame: KripkeFrame, op: Callable[[int], int]) -> int:
    """Greatest fixpoint of a monotone operator, iterating down from all worlds."""
    return _iterate(frame, op, frame.top)


def lfp(frame: KripkeFrame, op: Callable[[int], int]) -> int:
    return _iterate(frame, op, 0)


def cofree_box(frame: KripkeFrame, s: int) -> int:
    """``nu Y. s & /\\_i box_i Y``: worlds whose every reachable world is in ``s``."""
    return gfp(frame, lambda y: s & _all_boxes(frame, y))


def _all_boxes(frame, y):
    out = frame.top
    for i in frame.sorts:
        out &= box(frame, i, y)
    return out


def dia_star(frame: KripkeFrame, s: int) -> int:
    """``mu Y. s | \\/_i dia_i Y``: worlds that can reach ``s``."""
    def op(y):
        out = s
        for i in frame.sorts:
            out |= dia(frame, i, y)
        return out
    return lfp(frame, op)


def segerberg_lhs_operator(frame: KripkeFrame) -> Callable[[int], int]:
    vals = [(i, frame.val(i)) for i in frame.sorts]

    def op(x):
        out = 0
        for i, v in vals:
            out |= v & box(frame, i, x)
        return out
    return op


def segerberg_sides(frame: KripkeFrame):
    """Both sides of the fixpoint characterisation of well-formed behaviours.

    ``lhs = nu X. \\/_i (V_i & box_i X)`` and
    ``rhs = V_I & /\\_i cofree(~V_i | box_i V_I)`` with ``V_I`` the union of
    the valuations.
    """
    lhs = gfp(frame, segerberg_lhs_operator(frame))
    v_all = 0
    for i in frame.sorts:
        v_all |= frame.val(i)
    rhs = v_all
    top = frame.top
    for i in frame.sorts:
        rhs &= cofree_box(frame, (top & ~frame.val(i)) | box(frame, i, v_all))
    return lhs, rhs


def counterexample_check(frame: KripkeFrame):
    """Evaluate the diamond form of the two-sort characterisation.

    Returns ``(lhs, rhs, violated)`` where ``violated`` means ``lhs`` is not
    contained in ``rhs``.
    """
    if len(frame.sorts) != 2:
        raise SignatureError(f"needs exactly two sorts, frame has {len(frame.sorts)}")
    s1, s2 = frame.sorts
    v1, v2 = frame.val(s1), frame.val(s2)
    top = frame.top
    both = v1 & v2
    lhs = (both
           | dia_star(frame, (top & ~v1) & dia(frame, s1, both))
           | dia_star(frame, (top & ~v2) & dia(frame, s2, both)))
    rhs = lfp(frame, lambda x: (v1 | dia(frame, s1, x)) & (v2 | dia(frame, s2, x)))
    return lhs, rhs, bool(lhs & ~rhs)


def all_frames(n_worlds: int, sorts) -> Iterator[KripkeFrame]:
    """Every frame on worlds ``w0..w{n-1}``: all relations and valuations per sort."""
    worlds = tuple(f"w{k}" for k in range(n_worlds))
    pairs = list(itertools.product(worlds, repeat=2))
    sorts = tuple(sorts)

    def subsets(items):
        for bits in range(1 << len(items)):
            yield frozenset(x for k, x in enumerate(items) if bits >> k & 1)

    rel_choices = list(subsets(pairs))
    val_choices = list(subsets(worlds))
    for rels in itertools.product(rel_choices, repeat=len(sorts)):
        for vals in itertools.product(val_choices, repeat=len(sorts)):
            yield KripkeFrame(worlds, sorts, dict(zip(sorts, rels)), dict(zip(sorts, vals)))


def find_segerberg_counterexample(max_worlds: int = 3, sorts=("1", "2")):
    """Smallest frame (by world count, then enumeration order) where the sides differ."""
    for n in range(1, max_worlds + 1):
        for frame in all_frames(n, sorts):
            lhs, rhs = segerberg_sides(frame)
            if lhs != rhs:
                return frame
    return None
