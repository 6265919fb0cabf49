"""Exhaustive and random generation of small automata.

States of generated automata are the integers ``0..n-1``.
"""
from __future__ import annotations

import itertools
import random

from .automata import PAutomaton, QAutomaton
from .signature import SINK_SORT, Signature, make_signature


def _label_choices(sig, sorts):
    return itertools.product(*[sig.labels[s] if s != SINK_SORT else (None,) for s in sorts])


def _build(cls, sig, sorts, labels, targets, slots):
    n = len(sorts)
    sort_of = dict(enumerate(sorts))
    label_of = {q: lab for q, lab in enumerate(labels) if lab is not None}
    step = dict(zip(slots, targets))
    return cls(sig, tuple(range(n)), sort_of, label_of, step)


def all_p_automata(sig: Signature, n: int):
    """Every P-automaton on states ``0..n-1``."""
    for sorts in itertools.product(sig.sorts, repeat=n):
        slots = [(q, d) for q, s in enumerate(sorts) for d in sig.dirs[s]]
        for labels in _label_choices(sig, sorts):
            for targets in itertools.product(range(n), repeat=len(slots)):
                yield _build(PAutomaton, sig, sorts, labels, targets, slots)


def _q_slots(sig, n):
    return [(q, d) for q in range(n) for d in sig.dir_names]


def all_q_automata(sig: Signature, n: int, sort_sorted=False):
    """Every Q-automaton on states ``0..n-1``.

    With ``sort_sorted`` only sort assignments that are non-decreasing in
    sort order are produced; every automaton is isomorphic to one of those.
    """
    sorts_j = (SINK_SORT,) + sig.sorts
    slots = _q_slots(sig, n)
    if sort_sorted:
        assignments = itertools.combinations_with_replacement(sorts_j, n)
    else:
        assignments = itertools.product(sorts_j, repeat=n)
    for sorts in assignments:
        for labels in _label_choices(sig, sorts):
            for targets in itertools.product(range(n), repeat=len(slots)):
                yield _build(QAutomaton, sig, sorts, labels, targets, slots)


def _delta_targets(sig, sorts):
    sinks = [q for q, s in enumerate(sorts) if s == SINK_SORT]
    labelled = [q for q, s in enumerate(sorts) if s != SINK_SORT]
    out = []
    for q, s in enumerate(sorts):
        for d in sig.alphabet:
            out.append(labelled if (s != SINK_SORT and d.sort == s) else sinks)
    return out


def all_delta_q_automata(sig: Signature, n: int):
    """Every delta-automaton on states ``0..n-1``, generated directly."""
    slots = _q_slots(sig, n)
    for sorts in itertools.product((SINK_SORT,) + sig.sorts, repeat=n):
        choices = _delta_targets(sig, sorts)
        for labels in _label_choices(sig, sorts):
            for targets in itertools.product(*choices):
                yield _build(QAutomaton, sig, sorts, labels, targets, slots)


def _relabel_key(sorts, labels, table, perm):
    """Encoding of the automaton after renaming state ``q`` to ``perm[q]``."""
    n = len(perm)
    inv = [0] * n
    for q, p in enumerate(perm):
        inv[p] = q
    return tuple((sorts[inv[p]], labels[inv[p]], tuple(perm[t] for t in table[inv[p]]))
                 for p in range(n))


def q_automata_up_to_iso(sig: Signature, n: int):
    """One Q-automaton per isomorphism class on ``n`` states."""
    sort_rank = {s: r for r, s in enumerate((SINK_SORT,) + sig.sorts)}
    for aut in all_q_automata(sig, n, sort_sorted=True):
        sorts = tuple(sort_rank[aut.sort_of[q]] for q in range(n))
        labels = tuple(aut.label_of.get(q) or "" for q in range(n))
        table = tuple(tuple(aut.step[q, d] for d in sig.dir_names) for q in range(n))
        # permutations preserving the sorted sort assignment
        blocks = [list(g) for _, g in itertools.groupby(range(n), key=lambda q: (sorts[q], labels[q]))]
        if any(labels[q] < labels[q - 1] and sorts[q] == sorts[q - 1] for q in range(1, n)):
            continue  # not the label-sorted representative
        own = _relabel_key(sorts, labels, table, list(range(n)))
        if all(len(b) == 1 for b in blocks):
            yield aut
            continue
        minimal = True
        for perms in itertools.product(*[itertools.permutations(b) for b in blocks]):
            perm = [0] * n
            for b, pb in zip(blocks, perms):
                for q, p in zip(b, pb):
                    perm[q] = p
            if _relabel_key(sorts, labels, table, perm) < own:
                minimal = False
                break
        if minimal:
            yield aut


def rooted_accessible_q_automata(sig: Signature, n: int):
    """Every Q-automaton on ``0..n-1`` accessible from state ``0``, up to isomorphism.

    States are numbered in breadth-first discovery order, which makes the
    numbering canonical.
    """
    dirs = sig.dir_names
    k = len(dirs)
    slots = _q_slots(sig, n)
    tables = []

    def rec(pos, maxseen, acc):
        if pos == n * k:
            if maxseen == n - 1:
                tables.append(tuple(acc))
            return
        if pos // k > maxseen:
            return
        for t in range(min(maxseen + 2, n)):
            acc.append(t)
            rec(pos + 1, max(maxseen, t), acc)
            acc.pop()

    rec(0, 0, [])
    for sorts in itertools.product((SINK_SORT,) + sig.sorts, repeat=n):
        for labels in _label_choices(sig, sorts):
            for targets in tables:
                yield _build(QAutomaton, sig, sorts, labels, targets, slots)


def random_p_automaton(sig: Signature, n: int, rng: random.Random) -> PAutomaton:
    sorts = [rng.choice(sig.sorts) for _ in range(n)]
    labels = [rng.choice(sig.labels[s]) for s in sorts]
    slots = [(q, d) for q, s in enumerate(sorts) for d in sig.dirs[s]]
    targets = [rng.randrange(n) for _ in slots]
    return _build(PAutomaton, sig, sorts, labels, targets, slots)


def random_q_automaton(sig: Signature, n: int, rng: random.Random, delta_bias=0.0) -> QAutomaton:
    """Random Q-automaton; with probability ``delta_bias`` each transition obeys the delta rule."""
    sorts_j = (SINK_SORT,) + sig.sorts
    sorts = [rng.choice(sorts_j) for _ in range(n)]
    labels = [rng.choice(sig.labels[s]) if s != SINK_SORT else None for s in sorts]
    slots = _q_slots(sig, n)
    allowed = _delta_targets(sig, sorts)
    targets = []
    for choice in allowed:
        if choice and rng.random() < delta_bias:
            targets.append(rng.choice(choice))
        else:
            targets.append(rng.randrange(n))
    return _build(QAutomaton, sig, sorts, labels, targets, slots)


def random_signature(rng: random.Random, n_sorts: int, max_labels=2, max_dirs=2,
                     max_alphabet=None) -> Signature:
    spec = {}
    total = 0
    for k in range(1, n_sorts + 1):
        n_dirs = rng.randint(1, max_dirs)
        if max_alphabet is not None:
            n_dirs = max(1, min(n_dirs, max_alphabet - total - (n_sorts - k)))
        total += n_dirs
        spec[str(k)] = ([f"l{k}_{m}" for m in range(rng.randint(1, max_labels))],
                        [f"d{k}_{m}" for m in range(n_dirs)])
    return make_signature(spec)
