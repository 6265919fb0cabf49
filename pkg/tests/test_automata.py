import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycoalg import (AutMorphism, AutomatonError, BoundExceeded, PAutomaton, PreconditionError,
                       QAutomaton, SignatureMismatch, completion_K, completion_K_morphism,
                       delta_check, extend_by_sink, hom_count, hom_enumerate, identity,
                       is_isomorphic, is_morphism_p, is_morphism_q, make_signature, reflect_L, validate_p,
                       validate_q)
from polycoalg.automata import find_isomorphism, hom_index_maps, search_homs, sink_of
from polycoalg.generate import all_p_automata

from conftest import DIRS, SIG_FG, make_a_2loop, make_a_fg, make_a_loop
from strategies import p_automata, q_automata


def with_step(aut, extra=None, drop=None):
    step = dict(aut.step)
    if extra:
        step.update(extra)
    if drop:
        del step[drop]
    return type(aut)(aut.sig, aut.states, aut.sort_of, aut.label_of, step)


# -- validation ---------------------------------------------------------------

def test_validate_p_examples(a_loop, empty_p):
    validate_p(a_loop)
    validate_p(empty_p)
    with pytest.raises(AutomatonError, match="direction outside sort's arity"):
        validate_p(with_step(a_loop, {("q", "g1"): "q"}))


def test_validate_p_missing_and_bad_label(a_loop):
    with pytest.raises(AutomatonError, match="missing transition"):
        validate_p(with_step(a_loop, drop=("q", "f1")))
    relabelled = PAutomaton(SIG_FG, ["q"], {"q": "1"}, {"q": "g"}, {("q", "f1"): "q"})
    with pytest.raises(AutomatonError, match="label"):
        validate_p(relabelled)


def test_validate_q_examples(k_loop):
    validate_q(k_loop)
    with pytest.raises(AutomatonError, match="missing transition"):
        validate_q(with_step(k_loop, drop=("q", "g1")))
    labelled_sink = QAutomaton(SIG_FG, k_loop.states, k_loop.sort_of,
                               {**k_loop.label_of, "_sink_": "f"}, k_loop.step)
    with pytest.raises(AutomatonError, match="sink-sorted"):
        validate_q(labelled_sink)


def test_validate_rejects_dangling_target(a_loop):
    with pytest.raises(AutomatonError, match="not a state"):
        validate_p(with_step(a_loop, {("q", "f1"): "nowhere"}))


# -- morphisms ---------------------------------------------------------------

def test_identity_is_morphism(a_loop, k_loop):
    assert is_morphism_p(identity(a_loop))
    assert is_morphism_q(identity(k_loop))


def test_collapse_is_morphism(a_loop, a_2loop):
    assert is_morphism_p(AutMorphism(a_2loop, a_loop, {"q1": "q", "q2": "q"}))


def test_sort_mismatch_is_not_morphism(a_loop):
    src = PAutomaton.from_table(SIG_FG, {"q1": ("1", "f", {"f1": "q1"}),
                                         "q2": ("2", "g", {"g1": "q1", "g2": "q1"})})
    assert not is_morphism_p(AutMorphism(src, a_loop, {"q1": "q", "q2": "q"}))


def test_map_to_sink_is_not_morphism(k_loop):
    assert not is_morphism_q(AutMorphism(k_loop, k_loop, {"q": "_sink_", "_sink_": "_sink_"}))


def test_partial_map_is_not_morphism(a_2loop, a_loop):
    assert not is_morphism_p(AutMorphism(a_2loop, a_loop, {"q1": "q"}))


def test_signature_mismatch(a_loop, k_loop):
    with pytest.raises(SignatureMismatch):
        is_morphism_p(AutMorphism(a_loop, k_loop, {"q": "q"}))
    tiny_sig = make_signature({"1": (["f"], ["f1"])})
    tiny = PAutomaton.from_table(tiny_sig, {"q": ("1", "f", {"f1": "q"})})
    with pytest.raises(SignatureMismatch):
        hom_count(tiny, a_loop)


def test_k_of_morphism_is_q_morphism(a_loop, a_2loop):
    f = AutMorphism(a_2loop, a_loop, {"q1": "q", "q2": "q"})
    kf = completion_K_morphism(f)
    assert is_morphism_q(kf)
    assert kf("_sink_") == "_sink_"


# -- K and L -----------------------------------------------------------------

def test_completion_of_a_loop(a_loop, k_loop):
    expected = QAutomaton.from_table(SIG_FG, {
        "_sink_": ("0", None, {d: "_sink_" for d in DIRS}),
        "q": ("1", "f", {"f1": "q", "g1": "_sink_", "g2": "_sink_"})})
    assert k_loop == expected
    assert k_loop.states == ("_sink_", "q")
    assert delta_check(k_loop).verdict


def test_completion_of_empty(empty_p):
    k = completion_K(empty_p)
    assert k.states == ("_sink_",)
    assert all(k.step["_sink_", d] == "_sink_" for d in DIRS)


def test_sink_name_collision():
    aut = PAutomaton.from_table(SIG_FG, {"_sink_": ("1", "f", {"f1": "_sink_"}),
                                         "_sink_1": ("1", "f", {"f1": "_sink_"})})
    k = completion_K(aut)
    assert sink_of(k) == "_sink_2"
    validate_q(k)


def test_reflect_examples(a_loop, k_loop, sink_only, b_bad):
    assert reflect_L(k_loop) == a_loop
    assert len(reflect_L(sink_only)) == 0
    with pytest.raises(PreconditionError, match="'x'"):
        reflect_L(b_bad)


@given(p_automata())
def test_k_lands_in_delta_with_one_sink(aut):
    k = completion_K(aut)
    validate_q(k)
    assert delta_check(k).verdict
    assert len(k.sink_states) == 1


@given(p_automata())
def test_l_after_k_is_identity(aut):
    assert reflect_L(completion_K(aut)) == aut


@settings(max_examples=200)
@given(q_automata(delta_only=True, max_states=4))
def test_k_after_l_iso_iff_one_sink(aut):
    assert delta_check(aut).verdict
    back = completion_K(reflect_L(aut))
    assert is_isomorphic(back, aut) == (len(aut.sink_states) == 1)


# -- hom enumeration ------------------------------------------------------------

def test_hom_loop_loop(a_loop):
    homs = hom_enumerate(a_loop, a_loop)
    assert homs == [identity(a_loop)]


def test_hom_from_empty(empty_p, a_fg):
    assert hom_count(empty_p, a_fg) == 1
    assert hom_count(empty_p, empty_p) == 1
    assert hom_count(a_fg, empty_p) == 0


def test_hom_bound():
    with pytest.raises(BoundExceeded):
        hom_count(make_a_2loop(), make_a_2loop(), bound=3)


def test_hom_2loop():
    a2 = make_a_2loop()
    assert hom_count(a2, a2) == 4
    assert hom_count(a2, make_a_loop()) == 1
    assert hom_count(make_a_loop(), a2) == 2
    assert hom_count(make_a_fg(), a2) == 0


def test_adjunction_example(a_loop):
    # L(K A) = A so the adjunction reduces to fullness of K here
    assert hom_count(reflect_L(completion_K(a_loop)), a_loop) == \
        hom_count(completion_K(a_loop), completion_K(a_loop))


def test_extend_by_sink_round_trip(a_2loop, a_loop):
    delta = completion_K(a_2loop)
    f = AutMorphism(reflect_L(delta), a_loop, {"q1": "q", "q2": "q"})
    g = extend_by_sink(f, delta)
    assert is_morphism_q(g)


@settings(max_examples=150)
@given(p_automata(max_states=3), p_automata(max_states=3), st.data())
def test_backtracking_agrees_with_brute_force(a, b, data):
    if a.sig != b.sig:
        b = data.draw(p_automata(sig=a.sig, max_states=3))
    assert sorted(hom_index_maps(a, b)) == sorted(search_homs(a, b))


@settings(max_examples=100)
@given(q_automata(max_states=4), st.randoms(use_true_random=False))
def test_isomorphism_found_for_renamed_copy(aut, rnd):
    perm = list(aut.states)
    rnd.shuffle(perm)
    renamed = aut.rename({q: f"r_{p}" for q, p in zip(aut.states, perm)})
    iso = find_isomorphism(aut, renamed)
    assert iso is not None and is_morphism_q(iso)


def test_k_faithful_on_small_range():
    autos = [a for n in range(3) for a in all_p_automata(SIG_FG, n)]
    for a in autos[:12]:
        ka = completion_K(a)
        for b in autos[:12]:
            kb = completion_K(b)
            images = {completion_K_morphism(f, ka, kb).key() for f in hom_enumerate(a, b)}
            assert images == {g.key() for g in hom_enumerate(ka, kb)}
