"""Finite limits of automata.

Q-automata are coalgebras over the behaviours, so a product is the pullback
over behaviour: pairs of bisimilar states.  Limits of P-automata are obtained
by completing with ``K``, taking the limit among Q-automata, coreflecting with
``D`` and stripping the sink with ``L``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automata import (AutMorphism, PAutomaton, QAutomaton, _same_setting, completion_K,
                       completion_K_morphism, is_morphism_p, is_morphism_q, reflect_L)
from .behavior import _hopcroft
from .delta import coreflect_D, is_delta
from .errors import PreconditionError


@dataclass(frozen=True)
class LimitResult:
    """A limit object together with its projections, one per diagram vertex."""

    obj: object
    projections: tuple

    def __iter__(self):
        yield self.obj
        yield from self.projections


def _joint_classes(a: QAutomaton, b: QAutomaton):
    ia, ib = a._ix, b._ix
    off = len(ia.states)
    obs = ia.obs + ib.obs
    step = ia.step + tuple(tuple(t + off for t in row) for row in ib.step)
    blocks = _hopcroft(obs, step, len(a.sig.dir_names))
    return blocks[:off], blocks[off:]


def _pair_automaton(a: QAutomaton, b: QAutomaton, pairs) -> QAutomaton:
    keep = set(pairs)
    step = {}
    for (x, y) in pairs:
        for d in a.sig.dir_names:
            t = (a.step[x, d], b.step[y, d])
            if t not in keep:
                raise AssertionError(f"pair carrier not closed under {d!r} at {(x, y)!r}")
            step[(x, y), d] = t
    return QAutomaton(a.sig, pairs, {p: a.sort_of[p[0]] for p in pairs},
                      {p: a.label_of[p[0]] for p in pairs if p[0] in a.label_of}, step)


def _pair_limit(a, b, pairs) -> LimitResult:
    obj = _pair_automaton(a, b, pairs)
    return LimitResult(obj, (AutMorphism(obj, a, {p: p[0] for p in pairs}),
                             AutMorphism(obj, b, {p: p[1] for p in pairs})))


def product_q(a: QAutomaton, b: QAutomaton) -> LimitResult:
    """Product in Aut(Q): all pairs of bisimilar states, stepping componentwise."""
    _same_setting(a, b)
    ca, cb = _joint_classes(a, b)
    pairs = [(x, y) for x, i in zip(a.states, ca) for y, j in zip(b.states, cb) if i == j]
    return _pair_limit(a, b, pairs)


def _check_parallel(f, g, check):
    for h in (f, g):
        if not check(h):
            raise PreconditionError("not a valid morphism")
    if f.source != g.source or f.target != g.target:
        raise PreconditionError("morphisms are not parallel")


def equalizer_q(f: AutMorphism, g: AutMorphism) -> LimitResult:
    """Sub-automaton of states on which ``f`` and ``g`` agree."""
    _check_parallel(f, g, is_morphism_q)
    a = f.source
    keep = {q for q in a.states if f(q) == g(q)}
    for (q, d), t in a.step.items():
        if q in keep and t not in keep:
            raise AssertionError(f"equalizer carrier not closed under {d!r} at {q!r}")
    obj = a.restrict(keep)
    return LimitResult(obj, (AutMorphism(obj, a, {q: q for q in obj.states}),))


def pullback_q(f: AutMorphism, g: AutMorphism) -> LimitResult:
    """Pairs ``(x, y)`` of bisimilar states with ``f(x) == g(y)``."""
    for h in (f, g):
        if not is_morphism_q(h):
            raise PreconditionError("not a valid morphism")
    if f.target != g.target:
        raise PreconditionError("morphisms do not share a codomain")
    a, b = f.source, g.source
    _same_setting(a, b)
    ca, cb = _joint_classes(a, b)
    pairs = [(x, y) for x, i in zip(a.states, ca) for y, j in zip(b.states, cb)
             if i == j and f(x) == g(y)]
    return _pair_limit(a, b, pairs)


def _to_p(limit_q: LimitResult, targets) -> LimitResult:
    """Coreflect a Q-limit of K-images into delta, strip the sink, restrict projections."""
    d_obj, incl = coreflect_D(limit_q.obj)
    obj = reflect_L(d_obj)
    projections = tuple(
        AutMorphism(obj, tgt, {q: proj(incl(q)) for q in obj.states})
        for proj, tgt in zip(limit_q.projections, targets))
    return LimitResult(obj, projections)


def product_p(a: PAutomaton, b: PAutomaton) -> LimitResult:
    """Product in Aut(P), computed as ``L(D(product_q(K a, K b)))``."""
    _same_setting(a, b)
    return _to_p(product_q(completion_K(a), completion_K(b)), (a, b))


def equalizer_p(f: AutMorphism, g: AutMorphism) -> LimitResult:
    """Equalizer in Aut(P), computed as ``L(D(equalizer_q(K f, K g)))``."""
    _check_parallel(f, g, is_morphism_p)
    ka, kb = completion_K(f.source), completion_K(f.target)
    eq = equalizer_q(completion_K_morphism(f, ka, kb), completion_K_morphism(g, ka, kb))
    # a sub-automaton of a delta-automaton is delta, so D must not shrink it
    if not is_delta(eq.obj):
        raise AssertionError("equalizer of K-images left the delta subcategory")
    return _to_p(eq, (f.source,))

