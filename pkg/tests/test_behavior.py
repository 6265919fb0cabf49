import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycoalg import (BOT, SignatureError, StepFunction, behavior,
                       bisimilar, bisimulation_classes, bottom_tree, clause_check, completion_K,
                       coreflect_D, delta_check, hom_enumerate, is_isomorphic, is_morphism_q,
                       minimize, tree_eq_depth, unfold_tree)
from polycoalg.behavior import canonical_form, rooted_key
from polycoalg.signature import Label, words_upto

from conftest import DIRS, SIG_FG, make_a_2loop, make_a_fg
from strategies import p_automata, q_automata

F = Label("1", "f")
G = Label("2", "g")


def alternating_step():
    def fn(seed):
        if seed == "f":
            return "1", "f", {"f1": "g"}
        return "2", "g", {"g1": "f", "g2": "f"}
    return StepFunction(SIG_FG, fn)


def test_behavior_of_k_loop(k_loop):
    t = behavior(k_loop, "q")
    assert t(()) == F
    assert t(("f1",)) == F
    assert t(("g1",)) is BOT and t(("g2",)) is BOT
    assert t(("f1", "f1")) == F
    assert all(t(("g1", d)) is BOT for d in DIRS)


def test_behavior_unknown_state(k_loop):
    with pytest.raises(Exception, match="unknown state"):
        behavior(k_loop, "nope")


def test_sink_behavior_is_bottom(sink_only):
    t = behavior(sink_only, "bot")
    assert tree_eq_depth(t, bottom_tree(SIG_FG), 12)


def test_unfold_matches_behavior(k_loop):
    spine = unfold_tree(StepFunction(SIG_FG, lambda s: ("1", "f", {"f1": s})), ())
    assert tree_eq_depth(spine, behavior(k_loop, "q"), 10)


def test_figure_tree_depth_two():
    t = unfold_tree(alternating_step(), "f")
    assert t(()) == F
    assert t(("f1",)) == G
    assert t(("g1",)) is BOT and t(("g2",)) is BOT
    assert t(("f1", "f1")) is BOT
    assert t(("f1", "g1")) is not BOT and t(("f1", "g2")) is not BOT
    for d, e in itertools.product(("g1", "g2"), DIRS):
        assert t((d, e)) is BOT
    assert clause_check(t, 2, require_root=True)


def test_constant_step_tree():
    t = unfold_tree(StepFunction(SIG_FG, lambda s: ("2", "g", {"g1": 0, "g2": 0})), 0)
    for w in words_upto(SIG_FG, 4):
        expect = G if all(d in ("g1", "g2") for d in w) else BOT
        assert t(w) == expect


def test_step_function_contract():
    bad_label = unfold_tree(StepFunction(SIG_FG, lambda s: ("1", "g", {"f1": s})), 0)
    with pytest.raises(SignatureError, match="label"):
        bad_label(())
    missing = unfold_tree(StepFunction(SIG_FG, lambda s: ("2", "g", {"g1": s})), 0)
    with pytest.raises(SignatureError, match="misses"):
        missing(("g1",))


def test_unhashable_seeds_are_allowed():
    t = unfold_tree(StepFunction(SIG_FG, lambda s: ("1", "f", {"f1": s + [0]})), [])
    assert t(("f1", "f1", "f1")) == F


def test_tree_eq_depth_examples(k_loop):
    t = behavior(k_loop, "q")
    assert tree_eq_depth(t, t, 100)
    assert not tree_eq_depth(t, bottom_tree(SIG_FG), 0)
    with pytest.raises(ValueError):
        tree_eq_depth(t, t, -1)


def test_clause_examples():
    bot = bottom_tree(SIG_FG)
    assert clause_check(bot, 5)
    assert not clause_check(bot, 5, require_root=True)


def test_clause_detects_bad_child(b_bad):
    assert not clause_check(behavior(b_bad, "x"), 1)
    assert clause_check(behavior(b_bad, "x"), 0)


@settings(max_examples=150)
@given(p_automata(sig=SIG_FG, max_states=4))
def test_clauses_hold_on_k_images(aut):
    k = completion_K(aut)
    for q in aut.states:
        assert clause_check(behavior(k, q), 20, require_root=True)


@settings(max_examples=150)
@given(q_automata(max_states=5))
def test_clauses_hold_on_coreflected(aut):
    sub, _ = coreflect_D(aut)
    for q in sub.states:
        assert clause_check(behavior(sub, q), 20, require_root=sub.sort_of[q] != "0")


def test_bisimilar_examples(k_loop):
    k2 = completion_K(make_a_2loop())
    assert bisimilar(k_loop, "q", k2, "q1")
    assert not bisimilar(k_loop, "q", k_loop, "_sink_")


def test_minimize_examples(k_loop):
    k2 = completion_K(make_a_2loop())
    quotient, proj = minimize(k2)
    assert len(quotient) == 2
    assert proj("q1") == proj("q2")
    assert is_isomorphic(quotient, k_loop)
    kfg = completion_K(make_a_fg())
    assert is_isomorphic(minimize(kfg)[0], kfg)


@settings(max_examples=200)
@given(q_automata(max_states=5))
def test_minimize_properties(aut):
    quotient, proj = minimize(aut)
    assert is_morphism_q(proj)
    classes = bisimulation_classes(quotient)
    assert len(set(classes.values())) == len(quotient)
    assert is_isomorphic(minimize(quotient)[0], quotient)
    assert delta_check(quotient).verdict == delta_check(aut).verdict
    depth = 2 * len(aut)
    for q in aut.states:
        assert tree_eq_depth(behavior(aut, q), behavior(quotient, proj(q)), depth)


@settings(max_examples=200)
@given(q_automata(sig=SIG_FG, max_states=3), q_automata(sig=SIG_FG, max_states=3))
def test_behaviour_preserved_by_morphisms(a, b):
    depth = len(a) + len(b)
    for f in hom_enumerate(a, b):
        for q in a.states:
            assert tree_eq_depth(behavior(a, q), behavior(b, f(q)), depth)


@settings(max_examples=200)
@given(q_automata(sig=SIG_FG, max_states=3), q_automata(sig=SIG_FG, max_states=3), st.data())
def test_bisimilar_iff_equal_to_bound(a, b, data):
    qa = data.draw(st.sampled_from(a.states))
    qb = data.draw(st.sampled_from(b.states))
    assert bisimilar(a, qa, b, qb) == tree_eq_depth(behavior(a, qa), behavior(b, qb), len(a) + len(b))


@settings(max_examples=100)
@given(q_automata(sig=SIG_FG, max_states=4), q_automata(sig=SIG_FG, max_states=4))
def test_finality_into_minimal(a, m):
    m, _ = minimize(m)
    homs = hom_enumerate(a, m)
    assert len(homs) <= 1
    covered = all(any(bisimilar(a, q, m, r) for r in m.states) for q in a.states)
    assert (len(homs) == 1) == covered


@settings(max_examples=200)
@given(q_automata(max_states=5), st.randoms(use_true_random=False))
def test_canonical_form_is_rename_invariant(aut, rnd):
    perm = list(aut.states)
    rnd.shuffle(perm)
    renamed = aut.rename(dict(zip(aut.states, perm)))
    assert canonical_form(aut) == canonical_form(renamed)
    for q in aut.states:
        assert rooted_key(aut, q) == rooted_key(renamed, dict(zip(aut.states, perm))[q])


@settings(max_examples=200)
@given(q_automata(sig=SIG_FG, max_states=4), q_automata(sig=SIG_FG, max_states=4), st.data())
def test_rooted_key_decides_bisimilarity(a, b, data):
    qa = data.draw(st.sampled_from(a.states))
    qb = data.draw(st.sampled_from(b.states))
    assert (rooted_key(a, qa) == rooted_key(b, qb)) == bisimilar(a, qa, b, qb)


@settings(max_examples=100)
@given(st.integers(0, 3), st.integers(1, 3))
def test_unfold_round_trip(start, period):
    def fn(k):
        if k % 2 == 0:
            return "1", "f", {"f1": (k + 1) % (2 * period)}
        return "2", "g", {"g1": (k + 1) % (2 * period), "g2": 0}
    step = StepFunction(SIG_FG, fn)
    t = unfold_tree(step, start)
    seed, node = start, t
    for _ in range(8):
        sort, label, succ = fn(seed)
        assert node.root == Label(sort, label)
        d = next(iter(succ))
        seed, node = succ[d], node.child(d)
