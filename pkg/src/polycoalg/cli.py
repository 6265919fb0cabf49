"""Command-line interface.

Exit codes: 0 on success, 1 when a predicate command answers false (or a
check is violated), 2 on unreadable input or a violated precondition.
"""
from __future__ import annotations

import argparse
import sys

from . import formats
from .automata import (DEFAULT_HOM_BOUND, PAutomaton, completion_K, completion_K_morphism,
                       hom_count, is_morphism, reflect_L)
from .behavior import behavior, bisimilar, clause_check, minimize
from .delta import coreflect_D, delta_check, delta_check_words
from .errors import PolyCoalgError
from .fixpoint import counterexample_check, segerberg_sides
from .limits import LimitResult, equalizer_p, equalizer_q, product_p, product_q, pullback_q
from .signature import load_signature

DEFAULT_DEPTH = 10


class _Fail(Exception):
    """Input problem discovered by the CLI itself (exit 2)."""


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Fail(f"cannot read {path}: {exc.strerror}") from None


def _sig(args):
    try:
        return load_signature(_read(args.sig))
    except PolyCoalgError as exc:
        raise _Fail(f"{args.sig}: {exc}") from None


def _aut(path, sig):
    try:
        return formats.parse_automaton(_read(path), sig)
    except PolyCoalgError as exc:
        raise _Fail(f"{path}: {exc}") from None


def _as_q(aut):
    return completion_K(aut) if isinstance(aut, PAutomaton) else aut


def _qaut(path, sig):
    """Load an automaton; P-automata are completed so they can be read as Q-automata."""
    return _as_q(_aut(path, sig))


def _morph(path, source, target):
    try:
        return formats.parse_morphism(_read(path), source, target)
    except PolyCoalgError as exc:
        raise _Fail(f"{path}: {exc}") from None


def _qmorph(path, source, target):
    """Morphism between two loaded files, read at the Q level.

    When both ends are P-automata the map is written against them and lifted by K.
    """
    if isinstance(source, PAutomaton) and isinstance(target, PAutomaton):
        return completion_K_morphism(_morph(path, source, target))
    return _morph(path, _as_q(source), _as_q(target))


def _frame(path):
    try:
        return formats.parse_frame(_read(path))
    except PolyCoalgError as exc:
        raise _Fail(f"{path}: {exc}") from None


def _state(aut, name):
    if name not in aut.sort_of:
        raise _Fail(f"unknown state {name!r}")
    return name


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_limit(args, result):
    _emit(args, formats.render_automaton(result.obj))
    if args.proj_prefix:
        for k, p in enumerate(result.projections, 1):
            with open(f"{args.proj_prefix}{k}.morph", "w", encoding="utf-8", newline="\n") as fh:
                fh.write(formats.render_morphism(p))


def _world_set(frame, mask):
    return "{" + ",".join(frame.names(mask)) + "}"


def _verdict(ok: bool) -> int:
    print("true" if ok else "false")
    return 0 if ok else 1


# -- commands ---------------------------------------------------------------

def cmd_validate(args):
    aut = _aut(args.file, _sig(args))
    kind = "paut" if isinstance(aut, PAutomaton) else "qaut"
    print(f"ok {kind} {len(aut)} states")
    return 0


def cmd_complete(args):
    aut = _aut(args.file, _sig(args))
    if not isinstance(aut, PAutomaton):
        raise _Fail("complete expects a paut file")
    _emit(args, formats.render_automaton(completion_K(aut)))
    return 0


def cmd_reflect(args):
    aut = _aut(args.file, _sig(args))
    if isinstance(aut, PAutomaton):
        raise _Fail("reflect expects a qaut file")
    _emit(args, formats.render_automaton(reflect_L(aut)))
    return 0


def cmd_delta_check(args):
    report = delta_check(_qaut(args.file, _sig(args)))
    for line in report.lines():
        print(line)
    return 0 if report.verdict else 1


def cmd_delta_check_words(args):
    return _verdict(delta_check_words(_qaut(args.file, _sig(args))))


def cmd_coreflect(args):
    sub, incl = coreflect_D(_qaut(args.file, _sig(args)))
    _emit_limit(args, LimitResult(sub, (incl,)))
    return 0


def cmd_behavior(args):
    aut = _qaut(args.file, _sig(args))
    t = behavior(aut, _state(aut, args.state))
    if args.format == "dot":
        _emit(args, formats.tree_dot(t, args.depth))
    else:
        _emit(args, formats.tree_text(t, args.depth))
    return 0


def cmd_clauses(args):
    aut = _qaut(args.file, _sig(args))
    t = behavior(aut, _state(aut, args.state))
    return _verdict(clause_check(t, args.depth, require_root=args.require_root))


def cmd_bisim(args):
    sig = _sig(args)
    a, b = _qaut(args.file_a, sig), _qaut(args.file_b, sig)
    return _verdict(bisimilar(a, _state(a, args.state_a), b, _state(b, args.state_b)))


def cmd_minimize(args):
    quotient, proj = minimize(_qaut(args.file, _sig(args)))
    _emit_limit(args, LimitResult(quotient, (proj,)))
    return 0


def cmd_product_q(args):
    sig = _sig(args)
    _emit_limit(args, product_q(_qaut(args.file_a, sig), _qaut(args.file_b, sig)))
    return 0


def cmd_product_p(args):
    sig = _sig(args)
    a, b = _aut(args.file_a, sig), _aut(args.file_b, sig)
    if not (isinstance(a, PAutomaton) and isinstance(b, PAutomaton)):
        raise _Fail("product-p expects paut files")
    _emit_limit(args, product_p(a, b))
    return 0


def _parallel(args, read):
    sig = _sig(args)
    a, b = _aut(args.source, sig), _aut(args.target, sig)
    return read(args.f, a, b), read(args.g, a, b)


def cmd_equalizer_q(args):
    _emit_limit(args, equalizer_q(*_parallel(args, _qmorph)))
    return 0


def cmd_equalizer_p(args):
    f, g = _parallel(args, _morph)
    if not isinstance(f.source, PAutomaton) or not isinstance(f.target, PAutomaton):
        raise _Fail("equalizer-p expects paut files")
    _emit_limit(args, equalizer_p(f, g))
    return 0


def cmd_pullback_q(args):
    sig = _sig(args)
    a, b, c = (_aut(p, sig) for p in (args.file_a, args.file_b, args.file_c))
    _emit_limit(args, pullback_q(_qmorph(args.f, a, c), _qmorph(args.g, b, c)))
    return 0


def cmd_check_morphism(args):
    sig = _sig(args)
    a, b = _aut(args.source, sig), _aut(args.target, sig)
    if type(a) is not type(b):
        raise _Fail("source and target must be the same kind of automaton")
    return _verdict(is_morphism(_morph(args.morphism, a, b)))


def cmd_hom_count(args):
    sig = _sig(args)
    a, b = _aut(args.source, sig), _aut(args.target, sig)
    if type(a) is not type(b):
        raise _Fail("source and target must be the same kind of automaton")
    print(hom_count(a, b, bound=args.bound))
    return 0


def cmd_segerberg(args):
    frame = _frame(args.file)
    lhs, rhs = segerberg_sides(frame)
    print("lhs " + _world_set(frame, lhs))
    print("rhs " + _world_set(frame, rhs))
    print("equal " + ("true" if lhs == rhs else "false"))
    return 0 if lhs == rhs else 1


def cmd_counterexample(args):
    frame = _frame(args.file)
    lhs, rhs, violated = counterexample_check(frame)
    print("lhs " + _world_set(frame, lhs))
    print("rhs " + _world_set(frame, rhs))
    print("violated " + ("true" if violated else "false"))
    return 1 if violated else 0


def cmd_dot(args):
    _emit(args, formats.automaton_dot(_aut(args.file, _sig(args))))
    return 0


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polycoalg",
                                     description="Automata for polynomial functors.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help, sig=True, out=False, limit=False):
        p = sub.add_parser(name, help=help)
        if sig:
            p.add_argument("--sig", required=True, help="signature file")
        if out or limit:
            p.add_argument("--out", help="write the result here instead of stdout")
        if limit:
            p.add_argument("--proj-prefix",
                           help="write projections to PREFIX1.morph, PREFIX2.morph, ...")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check an automaton file").add_argument("file")
    add("complete", cmd_complete, "add a sink state (K)", out=True).add_argument("file")
    add("reflect", cmd_reflect, "strip sink states (L)", out=True).add_argument("file")
    add("delta-check", cmd_delta_check, "test the delta condition").add_argument("file")
    add("delta-check-words", cmd_delta_check_words,
        "test the delta condition by enumerating words").add_argument("file")
    add("coreflect", cmd_coreflect, "largest delta sub-automaton (D)", limit=True).add_argument("file")

    p = add("behavior", cmd_behavior, "print a truncated behaviour tree", out=True)
    p.add_argument("file")
    p.add_argument("--state", required=True)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--format", choices=("text", "dot"), default="text")

    p = add("clauses", cmd_clauses, "check the well-formedness clauses of a behaviour")
    p.add_argument("file")
    p.add_argument("--state", required=True)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--require-root", action="store_true")

    p = add("bisim", cmd_bisim, "decide whether two states are bisimilar")
    for name in ("file_a", "state_a", "file_b", "state_b"):
        p.add_argument(name)

    add("minimize", cmd_minimize, "quotient by bisimilarity", limit=True).add_argument("file")

    for name, func in (("product-q", cmd_product_q), ("product-p", cmd_product_p)):
        p = add(name, func, "binary product", limit=True)
        p.add_argument("file_a")
        p.add_argument("file_b")

    for name, func in (("equalizer-q", cmd_equalizer_q), ("equalizer-p", cmd_equalizer_p)):
        p = add(name, func, "equalizer of two parallel morphisms", limit=True)
        for arg in ("source", "target", "f", "g"):
            p.add_argument(arg)

    p = add("pullback-q", cmd_pullback_q, "pullback of f: A -> C and g: B -> C", limit=True)
    for arg in ("file_a", "file_b", "file_c", "f", "g"):
        p.add_argument(arg)

    p = add("check-morphism", cmd_check_morphism, "check a morphism file")
    for arg in ("source", "target", "morphism"):
        p.add_argument(arg)

    p = add("hom-count", cmd_hom_count, "count morphisms between two automata")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--bound", type=int, default=DEFAULT_HOM_BOUND,
                   help="maximum number of candidate maps")

    add("segerberg", cmd_segerberg, "evaluate both sides of the fixpoint equation",
        sig=False).add_argument("file")
    add("counterexample", cmd_counterexample, "evaluate the two-sort diamond inequality",
        sig=False).add_argument("file")
    add("dot", cmd_dot, "Graphviz rendering of an automaton", out=True).add_argument("file")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "depth", 0) < 0:
        print("error: depth must be non-negative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (_Fail, PolyCoalgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
