"""Membership in the delta subcategory and the coreflector ``D``.

A Q-automaton is a delta-automaton when, from a state of sort ``j``, every
direction of sort ``j`` leads to a labelled state and every other direction
leads to the sink sort.  ``delta_check`` tests this locally; ``delta_check_words``
re-derives the verdict from the subobjects ``P_j`` and ``P_{i,j}`` of pairs
``(word, state)``, without looking at the local condition.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automata import AutMorphism, QAutomaton, _delta_witness, delta_violations, is_morphism_q
from .errors import PreconditionError
from .signature import SINK_SORT, words_upto


class ExtendedAction:
    """The action of words on states: ``act(w, q)`` follows ``w`` from ``q``."""

    def __init__(self, aut: QAutomaton):
        self.aut = aut

    def __call__(self, word, q):
        step = self.aut.step
        for d in word:
            q = step[q, d]
        return q

    def extend(self, d, word, q):
        """The action of ``d`` applied to the pair ``(word, q)``: follow ``word`` then ``d``."""
        return self(tuple(word) + (d,), q)


@dataclass(frozen=True)
class DeltaReport:
    verdict: bool
    witnesses: tuple = field(default=())

    def __bool__(self):
        return self.verdict

    def lines(self) -> list:
        return [f"BAD {q} {d} {s}" for q, d, s in self.witnesses]


def delta_check(aut: QAutomaton) -> DeltaReport:
    """Report every ``(state, direction, target sort)`` breaking the delta condition."""
    witnesses = tuple(w for q in aut.states for w in delta_violations(aut, q))
    return DeltaReport(not witnesses, witnesses)


def is_delta(aut: QAutomaton) -> bool:
    return _delta_witness(aut) is None


def delta_check_words(aut: QAutomaton) -> bool:
    """Check ``P_j <= forall_{F_i} P_{i,j}`` for every ``i`` and ``j`` by enumeration.

    Words are bounded by ``|states| - 1``, which reaches every reachable state.
    """
    sig = aut.sig
    act = ExtendedAction(aut)
    words = words_upto(sig, max(0, len(aut.states) - 1))
    pairs = [(w, q) for w in words for q in aut.states]
    sorts_j = (SINK_SORT,) + sig.sorts

    p_j = {j: {(w, q) for (w, q) in pairs if aut.sort_of[act(w, q)] == j} for j in sorts_j}

    def in_p_ij(i, j, d, w, q):
        s = aut.sort_of[act.extend(d, w, q)]
        return s != SINK_SORT if i == j else s == SINK_SORT

    for i in sig.sorts:
        for j in sorts_j:
            for (w, q) in p_j[j]:
                if not all(in_p_ij(i, j, d, w, q) for d in sig.dirs[i]):
                    return False
    return True


def _d_carrier(aut: QAutomaton) -> set:
    bad = {q for q in aut.states if next(delta_violations(aut, q), None) is not None}
    pred = {q: [] for q in aut.states}
    for (q, _d), t in aut.step.items():
        pred[t].append(q)
    # everything that can reach a locally bad state is excluded
    excluded = set(bad)
    queue = deque(bad)
    while queue:
        t = queue.popleft()
        for q in pred[t]:
            if q not in excluded:
                excluded.add(q)
                queue.append(q)
    return {q for q in aut.states if q not in excluded}


def coreflect_D(aut: QAutomaton):
    """Largest sub-automaton all of whose reachable states are locally delta.

    Returns ``(D(aut), inclusion)``.
    """
    carrier = _d_carrier(aut)
    sub = aut.restrict(carrier)
    return sub, AutMorphism(sub, aut, {q: q for q in sub.states})


def factoring_check(f: AutMorphism) -> bool:
    """Whether a morphism out of a delta-automaton lands inside ``D`` of its target."""
    if not is_morphism_q(f):
        raise PreconditionError("not a Q-morphism")
    if not is_delta(f.source):
        raise PreconditionError("source is not a delta-automaton")
    carrier = _d_carrier(f.target)
    return all(t in carrier for t in f.mapping.values())
