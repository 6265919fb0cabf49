"""P-automata, Q-automata and the functors between them.

A P-automaton is a partial deterministic automaton whose states are tagged by
sort: a state of sort ``i`` has one successor for every direction in ``dirs(i)``
and carries a label from ``labels(i)``.  A Q-automaton is total over the full
alphabet and may have states of the extra sink sort ``"0"``, which carry no
label.  Coproducts of state sets are represented by the ``sort_of`` tagging.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterator, Mapping

from .errors import AutomatonError, BoundExceeded, PreconditionError, SignatureMismatch
from .signature import BOT, SINK_SORT, Label, Signature

DEFAULT_HOM_BOUND = 10**6
SINK_NAME = "_sink_"


class _Indexed:
    """Integer-coded copy of an automaton used by the hot loops."""

    __slots__ = ("states", "index", "sort", "obs", "step", "dirs")

    def __init__(self, aut):
        sig = aut.sig
        sort_code = {s: k for k, s in enumerate(sig.sorts, start=1)}
        sort_code[SINK_SORT] = 0
        obs_code = {lab.name: k for k, lab in enumerate(sig.omega) if lab is not BOT}
        dir_ix = {d: k for k, d in enumerate(sig.dir_names)}
        self.states = aut.states
        self.index = {q: k for k, q in enumerate(aut.states)}
        self.sort = tuple(sort_code[aut.sort_of[q]] for q in aut.states)
        self.obs = tuple(0 if aut.sort_of[q] == SINK_SORT else obs_code[aut.label_of[q]]
                         for q in aut.states)
        if isinstance(aut, QAutomaton):
            applicable = {c: tuple(range(len(dir_ix))) for c in range(len(sig.sorts) + 1)}
        else:
            applicable = {sort_code[s]: tuple(dir_ix[d] for d in sig.dirs[s]) for s in sig.sorts}
        self.dirs = tuple(applicable[c] for c in self.sort)
        table = []
        for q, ds in zip(aut.states, self.dirs):
            row = [-1] * len(dir_ix)
            for k in ds:
                row[k] = self.index[aut.step[q, sig.dir_names[k]]]
            table.append(tuple(row))
        self.step = tuple(table)


class _Automaton:
    """Shared behaviour of the two automaton kinds."""

    kind = ""

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "sort_of", dict(self.sort_of))
        object.__setattr__(self, "label_of", dict(self.label_of))
        object.__setattr__(self, "step", dict(self.step))

    def __len__(self):
        return len(self.states)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.sig == other.sig and set(self.states) == set(other.states)
                and self.sort_of == other.sort_of and self.label_of == other.label_of
                and self.step == other.step)

    __hash__ = None

    @cached_property
    def _ix(self) -> _Indexed:
        try:
            return _Indexed(self)
        except KeyError as exc:
            raise AutomatonError(f"malformed {self.kind}-automaton: missing entry {exc}") from None

    def successor(self, q, d):
        return self.step[q, d.name if isinstance(d, tuple) else d]

    def observation(self, q):
        """``BOT`` for sink-sorted states, otherwise ``Label(sort, label)``."""
        s = self.sort_of[q]
        return BOT if s == SINK_SORT else Label(s, self.label_of[q])

    def restrict(self, keep):
        """Sub-automaton on ``keep``; the caller guarantees forward closure."""
        keep = set(keep)
        states = [q for q in self.states if q in keep]
        return type(self)(
            self.sig, states,
            {q: self.sort_of[q] for q in states},
            {q: self.label_of[q] for q in states if q in self.label_of},
            {(q, d): t for (q, d), t in self.step.items() if q in keep})

    def rename(self, names: Mapping) -> "_Automaton":
        """Copy with every state ``q`` renamed to ``names[q]`` (must be injective)."""
        if len(set(names[q] for q in self.states)) != len(self.states):
            raise AutomatonError("renaming is not injective")
        return type(self)(
            self.sig, [names[q] for q in self.states],
            {names[q]: s for q, s in self.sort_of.items()},
            {names[q]: lab for q, lab in self.label_of.items()},
            {(names[q], d): names[t] for (q, d), t in self.step.items()})

    @classmethod
    def from_table(cls, sig: Signature, table: Mapping):
        """Build from ``{state: (sort, label, {direction: target})}``.

        Use ``None`` as the label of sink-sorted states.
        """
        sort_of, label_of, step = {}, {}, {}
        for q, (sort, label, succ) in table.items():
            sort_of[q] = sort
            if label is not None:
                label_of[q] = label
            for d, t in succ.items():
                step[q, d] = t
        return cls(sig, list(table), sort_of, label_of, step)

    def __repr__(self):
        return f"{type(self).__name__}(states={list(self.states)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class PAutomaton(_Automaton):
    sig: Signature
    states: tuple
    sort_of: Mapping[Hashable, str]
    label_of: Mapping[Hashable, str]
    step: Mapping[tuple, Hashable]

    kind = "P"


@dataclass(frozen=True, eq=False, repr=False)
class QAutomaton(_Automaton):
    sig: Signature
    states: tuple
    sort_of: Mapping[Hashable, str]
    label_of: Mapping[Hashable, str]
    step: Mapping[tuple, Hashable]

    kind = "Q"

    @cached_property
    def sink_states(self) -> tuple:
        return tuple(q for q in self.states if self.sort_of[q] == SINK_SORT)


@dataclass(frozen=True, eq=False)
class AutMorphism:
    """A state map between automata of the same kind.  Not trusted: see is_morphism_*."""

    source: _Automaton
    target: _Automaton
    mapping: Mapping

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))

    def __call__(self, q):
        return self.mapping[q]

    def __eq__(self, other):
        if not isinstance(other, AutMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.mapping == other.mapping)

    __hash__ = None

    def then(self, other: "AutMorphism") -> "AutMorphism":
        """Diagrammatic composite: first ``self``, then ``other``."""
        return AutMorphism(self.source, other.target,
                           {q: other.mapping[t] for q, t in self.mapping.items()})

    def image(self) -> set:
        return set(self.mapping.values())

    def key(self) -> tuple:
        """Hashable form of the mapping, in source state order."""
        return tuple(self.mapping[q] for q in self.source.states)


def identity(aut) -> AutMorphism:
    return AutMorphism(aut, aut, {q: q for q in aut.states})


# -- validation -------------------------------------------------------------

def _check_common(aut, allowed_sorts):
    sig = aut.sig
    if len(set(aut.states)) != len(aut.states):
        raise AutomatonError("duplicate state")
    states = set(aut.states)
    for table, what in ((aut.sort_of, "sort_of"), (aut.label_of, "label_of")):
        for q in table:
            if q not in states:
                raise AutomatonError(f"{what} mentions unknown state {q!r}")
    for q in aut.states:
        if q not in aut.sort_of:
            raise AutomatonError(f"state {q!r} has no sort")
        if aut.sort_of[q] not in allowed_sorts:
            raise AutomatonError(f"state {q!r} has sort {aut.sort_of[q]!r} outside the signature")
    for (q, d), t in aut.step.items():
        if q not in states:
            raise AutomatonError(f"transition from unknown state {q!r}")
        if d not in sig.dir_sort:
            raise AutomatonError(f"unknown direction {d!r} in step({q!r}, {d!r})")
        if t not in states:
            raise AutomatonError(f"step({q!r}, {d!r}) = {t!r} is not a state")


def _check_label(aut, q):
    s = aut.sort_of[q]
    if q not in aut.label_of:
        raise AutomatonError(f"state {q!r} of sort {s!r} has no label")
    if aut.label_of[q] not in aut.sig.labels[s]:
        raise AutomatonError(f"label {aut.label_of[q]!r} of state {q!r} not in labels of sort {s!r}")


def validate_p(aut: PAutomaton) -> None:
    """Raise ``AutomatonError`` naming the first violated P-automaton invariant."""
    sig = aut.sig
    _check_common(aut, set(sig.sorts))
    for q in aut.states:
        _check_label(aut, q)
    for (q, d) in aut.step:
        if sig.dir_sort[d] != aut.sort_of[q]:
            raise AutomatonError(
                f"direction outside sort's arity: step({q!r}, {d!r}) with {q!r} of sort {aut.sort_of[q]!r}")
    for q in aut.states:
        for d in sig.dirs[aut.sort_of[q]]:
            if (q, d) not in aut.step:
                raise AutomatonError(f"missing transition step({q!r}, {d!r})")


def validate_q(aut: QAutomaton) -> None:
    """Raise ``AutomatonError`` naming the first violated Q-automaton invariant."""
    sig = aut.sig
    _check_common(aut, set(sig.sorts) | {SINK_SORT})
    for q in aut.states:
        if aut.sort_of[q] == SINK_SORT:
            if q in aut.label_of:
                raise AutomatonError(f"sink-sorted state {q!r} carries a label")
        else:
            _check_label(aut, q)
    for q in aut.states:
        for d in sig.dir_names:
            if (q, d) not in aut.step:
                raise AutomatonError(f"missing transition step({q!r}, {d!r})")


def validate(aut) -> None:
    (validate_q if isinstance(aut, QAutomaton) else validate_p)(aut)


# -- morphisms --------------------------------------------------------------

def _same_setting(a, b):
    if type(a) is not type(b):
        raise SignatureMismatch(f"cannot relate a {a.kind}-automaton to a {b.kind}-automaton")
    if a.sig != b.sig:
        raise SignatureMismatch("automata are over different signatures")


def _commutes(ia: _Indexed, ib: _Indexed, f) -> bool:
    obs_b, step_b = ib.obs, ib.step
    for q, fq in enumerate(f):
        if ia.obs[q] != obs_b[fq]:
            return False
        row_a, row_b = ia.step[q], step_b[fq]
        for k in ia.dirs[q]:
            if f[row_a[k]] != row_b[k]:
                return False
    return True


def _as_index_map(f: AutMorphism):
    ia, ib = f.source._ix, f.target._ix
    try:
        return tuple(ib.index[f.mapping[q]] for q in ia.states)
    except (KeyError, TypeError):
        return None


def _is_morphism(f: AutMorphism, kind) -> bool:
    _same_setting(f.source, f.target)
    if f.source.kind != kind:
        raise SignatureMismatch(f"expected {kind}-automata, got {f.source.kind}-automata")
    fm = _as_index_map(f)
    if fm is None:
        return False
    # labels encode their sort, so comparing observation codes checks both
    return _commutes(f.source._ix, f.target._ix, fm)


def is_morphism_p(f: AutMorphism) -> bool:
    """Sort, label and transition preservation for a map between P-automata."""
    return _is_morphism(f, "P")


def is_morphism_q(f: AutMorphism) -> bool:
    return _is_morphism(f, "Q")


def is_morphism(f: AutMorphism) -> bool:
    return _is_morphism(f, f.source.kind)


def hom_index_maps(a, b, bound=DEFAULT_HOM_BOUND) -> Iterator[tuple]:
    """Brute-force enumeration of morphisms as tuples of target indices.

    Every sort-preserving map is generated and filtered by the morphism
    equations.  ``len(b) ** len(a)`` must not exceed ``bound``.
    """
    _same_setting(a, b)
    if len(b) ** len(a) > bound:
        raise BoundExceeded(f"{len(b)}^{len(a)} candidate maps exceed the bound {bound}")
    ia, ib = a._ix, b._ix
    by_sort = {}
    for k, s in enumerate(ib.sort):
        by_sort.setdefault(s, []).append(k)
    candidates = [by_sort.get(s, ()) for s in ia.sort]
    for f in itertools.product(*candidates):
        if _commutes(ia, ib, f):
            yield f


def hom_enumerate(a, b, bound=DEFAULT_HOM_BOUND) -> list:
    """The complete list of morphisms ``a -> b``."""
    states_b = b.states
    return [AutMorphism(a, b, {q: states_b[t] for q, t in zip(a.states, f)})
            for f in hom_index_maps(a, b, bound)]


def hom_count(a, b, bound=DEFAULT_HOM_BOUND) -> int:
    return sum(1 for _ in hom_index_maps(a, b, bound))


def search_homs(a, b, injective=False) -> Iterator[tuple]:
    """Backtracking search for morphisms, propagating images along transitions.

    An independent route to the same set as ``hom_index_maps``, usable on
    automata too large for brute force.
    """
    _same_setting(a, b)
    ia, ib = a._ix, b._ix
    n = len(ia.states)
    by_obs = {}
    for k, o in enumerate(ib.obs):
        by_obs.setdefault(o, []).append(k)
    f = [-1] * n

    def assign(q, t, trail, used):
        stack = [(q, t)]
        while stack:
            q, t = stack.pop()
            if f[q] != -1:
                if f[q] != t:
                    return False
                continue
            if ia.obs[q] != ib.obs[t] or (injective and t in used):
                return False
            f[q] = t
            trail.append(q)
            used.add(t)
            row_a, row_b = ia.step[q], ib.step[t]
            for k in ia.dirs[q]:
                stack.append((row_a[k], row_b[k]))
        return True

    used = set()

    def rec(q):
        while q < n and f[q] != -1:
            q += 1
        if q == n:
            yield tuple(f)
            return
        for t in by_obs.get(ia.obs[q], ()):
            trail = []
            if assign(q, t, trail, used):
                yield from rec(q + 1)
            for r in trail:
                used.discard(f[r])
                f[r] = -1

    yield from rec(0)


def find_isomorphism(a, b):
    """An isomorphism ``a -> b`` as an ``AutMorphism``, or ``None``."""
    if type(a) is not type(b) or a.sig != b.sig or len(a) != len(b):
        return None
    for f in search_homs(a, b, injective=True):
        return AutMorphism(a, b, {q: b.states[t] for q, t in zip(a.states, f)})
    return None


def is_isomorphic(a, b) -> bool:
    return find_isomorphism(a, b) is not None


# -- the completion functor K and its left adjoint L --------------------------

def fresh_name(base: str, taken) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def completion_K(aut: PAutomaton) -> QAutomaton:
    """Add one absorbing sink and send every foreign direction to it."""
    sig = aut.sig
    sink = fresh_name(SINK_NAME, aut.states)
    step = {(sink, d): sink for d in sig.dir_names}
    for q in aut.states:
        own = sig.dirs[aut.sort_of[q]]
        for d in sig.dir_names:
            step[q, d] = aut.step[q, d] if d in own else sink
    sort_of = {sink: SINK_SORT}
    sort_of.update(aut.sort_of)
    return QAutomaton(sig, (sink,) + aut.states, sort_of, aut.label_of, step)


def sink_of(aut: QAutomaton):
    """The unique sink-sorted state of an automaton in the image of K."""
    sinks = aut.sink_states
    if len(sinks) != 1:
        raise PreconditionError(f"expected exactly one sink-sorted state, found {len(sinks)}")
    return sinks[0]


def completion_K_morphism(f: AutMorphism, source_k=None, target_k=None) -> AutMorphism:
    """``1 + f``: the image of a P-morphism under K."""
    ka = source_k if source_k is not None else completion_K(f.source)
    kb = target_k if target_k is not None else completion_K(f.target)
    mapping = {sink_of(ka): sink_of(kb)}
    mapping.update(f.mapping)
    return AutMorphism(ka, kb, mapping)


def delta_violations(aut: QAutomaton, q):
    """Yield ``(q, direction, target sort)`` for each local delta violation at ``q``."""
    j = aut.sort_of[q]
    for d in aut.sig.alphabet:
        target = aut.sort_of[aut.step[q, d.name]]
        if j != SINK_SORT and d.sort == j:
            if target == SINK_SORT:
                yield q, d.name, target
        elif target != SINK_SORT:
            yield q, d.name, target


def _delta_witness(aut: QAutomaton):
    for q in aut.states:
        for w in delta_violations(aut, q):
            return w
    return None


def reflect_L(aut: QAutomaton) -> PAutomaton:
    """Strip the sink sort of a delta-automaton, keeping same-sort transitions."""
    bad = _delta_witness(aut)
    if bad is not None:
        q, d, s = bad
        raise PreconditionError(
            f"not a delta-automaton: step({q!r}, {d!r}) lands in sort {s!r}")
    sig = aut.sig
    states = [q for q in aut.states if aut.sort_of[q] != SINK_SORT]
    step = {(q, d): aut.step[q, d] for q in states for d in sig.dirs[aut.sort_of[q]]}
    return PAutomaton(sig, states, {q: aut.sort_of[q] for q in states},
                      {q: aut.label_of[q] for q in states}, step)


def extend_by_sink(f: AutMorphism, delta_aut: QAutomaton) -> AutMorphism:
    """Transpose ``f: L(A) -> B`` to ``! + f: A -> K(B)``."""
    kb = completion_K(f.target)
    sink = sink_of(kb)
    mapping = {q: (sink if delta_aut.sort_of[q] == SINK_SORT else f.mapping[q])
               for q in delta_aut.states}
    return AutMorphism(delta_aut, kb, mapping)


def restrict_to_labeled(g: AutMorphism, target: PAutomaton) -> AutMorphism:
    """Transpose ``g: A -> K(B)`` back to ``L(A) -> B``."""
    la = reflect_L(g.source)
    return AutMorphism(la, target, {q: g.mapping[q] for q in la.states})
