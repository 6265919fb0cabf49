"""Text formats for automata, morphisms and frames, plus Graphviz output.

All formats are line based; ``#`` starts a comment and blank lines are ignored.

P-automaton::

    paut
    state <name> sort <sort> label <label>
    trans <state> <direction> <target>

Q-automaton: header ``qaut``; a state of sort ``0`` has no ``label`` part.

Morphism (source and target are supplied separately)::

    morphism
    map <source state> -> <target state>

Kripke frame (the ``sorts`` line is optional; without it sorts are taken in
order of first mention)::

    frame
    worlds <name>+
    sorts <sort>+
    rel <sort> <from> <to>
    val <sort> <world>+
"""
from __future__ import annotations

from .automata import AutMorphism, PAutomaton, QAutomaton, validate
from .errors import ParseError
from .fixpoint import KripkeFrame
from .signature import SINK_SORT, Signature, content_lines, token


def state_token(q) -> str:
    """Printable name of a state; tuples (limit states) become ``<a,b>``."""
    if isinstance(q, tuple):
        return "<" + ",".join(state_token(x) for x in q) + ">"
    return str(q)


def stringify_states(aut):
    """Rename states to their printable names so the automaton can be written out."""
    if all(isinstance(q, str) for q in aut.states):
        return aut
    return aut.rename({q: state_token(q) for q in aut.states})


def parse_automaton(text: str, sig: Signature):
    """Parse a ``paut`` or ``qaut`` file and validate the result."""
    lines = list(content_lines(text))
    if not lines or lines[0][1] not in (["paut"], ["qaut"]):
        raise ParseError("expected header 'paut' or 'qaut'", lines[0][0] if lines else 1)
    cls = PAutomaton if lines[0][1] == ["paut"] else QAutomaton
    states, sort_of, label_of, step = [], {}, {}, {}
    for lineno, toks in lines[1:]:
        head = toks[0]
        if head == "state":
            if len(toks) == 4 and toks[2] == "sort":
                name, sort, label = toks[1], toks[3], None
            elif len(toks) == 6 and toks[2] == "sort" and toks[4] == "label":
                name, sort, label = toks[1], toks[3], toks[5]
            else:
                raise ParseError("expected 'state <name> sort <sort> [label <label>]'", lineno)
            if name in sort_of:
                raise ParseError(f"duplicate state {name!r}", lineno)
            if label is None and (cls is PAutomaton or sort != SINK_SORT):
                raise ParseError(f"state {name!r} of sort {sort!r} needs a label", lineno)
            if label is not None and sort == SINK_SORT:
                raise ParseError(f"sink-sorted state {name!r} cannot carry a label", lineno)
            states.append(name)
            sort_of[name] = sort
            if label is not None:
                label_of[name] = label
        elif head == "trans":
            if len(toks) != 4:
                raise ParseError("expected 'trans <state> <direction> <target>'", lineno)
            _, q, d, t = toks
            if (q, d) in step:
                raise ParseError(f"duplicate transition for ({q}, {d})", lineno)
            step[q, d] = t
        else:
            raise ParseError(f"unexpected keyword {head!r}", lineno)
    aut = cls(sig, states, sort_of, label_of, step)
    validate(aut)
    return aut


def render_automaton(aut) -> str:
    aut = stringify_states(aut)
    out = ["paut" if isinstance(aut, PAutomaton) else "qaut"]
    for q in aut.states:
        s = aut.sort_of[q]
        line = f"state {q} sort {s}"
        if s != SINK_SORT:
            line += f" label {aut.label_of[q]}"
        out.append(line)
    for q in aut.states:
        for d in aut.sig.dir_names:
            if (q, d) in aut.step:
                out.append(f"trans {q} {d} {aut.step[q, d]}")
    return "\n".join(out) + "\n"


def parse_morphism(text: str, source, target) -> AutMorphism:
    lines = list(content_lines(text))
    if not lines or lines[0][1] != ["morphism"]:
        raise ParseError("expected header 'morphism'", lines[0][0] if lines else 1)
    mapping = {}
    known = set(source.states)
    for lineno, toks in lines[1:]:
        if len(toks) != 4 or toks[0] != "map" or toks[2] != "->":
            raise ParseError("expected 'map <state> -> <state>'", lineno)
        if toks[1] in mapping:
            raise ParseError(f"state {toks[1]!r} mapped twice", lineno)
        if toks[1] not in known:
            raise ParseError(f"unknown source state {toks[1]!r}", lineno)
        mapping[toks[1]] = toks[3]
    missing = [q for q in source.states if q not in mapping]
    if missing:
        raise ParseError(f"morphism does not map {missing}")
    return AutMorphism(source, target, mapping)


def render_morphism(f: AutMorphism) -> str:
    out = ["morphism"]
    out += [f"map {state_token(q)} -> {state_token(f.mapping[q])}" for q in f.source.states]
    return "\n".join(out) + "\n"


def parse_frame(text: str) -> KripkeFrame:
    lines = list(content_lines(text))
    if not lines or lines[0][1] != ["frame"]:
        raise ParseError("expected header 'frame'", lines[0][0] if lines else 1)
    worlds, sorts, declared = None, [], False
    rel, val = {}, {}
    for lineno, toks in lines[1:]:
        head, args = toks[0], toks[1:]
        if head == "worlds":
            if worlds is not None or not args:
                raise ParseError("'worlds' must appear once with at least one name", lineno)
            if len(set(args)) != len(args):
                raise ParseError("duplicate world", lineno)
            worlds = args
            continue
        if worlds is None:
            raise ParseError("'worlds' must come first", lineno)
        if head == "sorts":
            if declared or not args:
                raise ParseError("'sorts' must appear once with at least one name", lineno)
            sorts, declared = list(args), True
            continue
        if head not in ("rel", "val"):
            raise ParseError(f"unexpected keyword {head!r}", lineno)
        if not args:
            raise ParseError(f"'{head}' needs a sort", lineno)
        s = args[0]
        if s not in sorts:
            if declared:
                raise ParseError(f"undeclared sort {s!r}", lineno)
            sorts.append(s)
        if head == "rel":
            if len(args) != 3:
                raise ParseError("expected 'rel <sort> <from> <to>'", lineno)
            pair = (args[1], args[2])
            for w in pair:
                if w not in worlds:
                    raise ParseError(f"unknown world {w!r}", lineno)
            rel.setdefault(s, set()).add(pair)
        else:
            if len(args) < 2:
                raise ParseError("expected 'val <sort> <world>+'", lineno)
            for w in args[1:]:
                if w not in worlds:
                    raise ParseError(f"unknown world {w!r}", lineno)
            val.setdefault(s, set()).update(args[1:])
    if worlds is None:
        raise ParseError("missing 'worlds' line")
    return KripkeFrame(tuple(worlds), tuple(sorts), rel, val)


def render_frame(frame: KripkeFrame) -> str:
    out = ["frame", "worlds " + " ".join(frame.worlds), "sorts " + " ".join(frame.sorts)]
    order = {w: k for k, w in enumerate(frame.worlds)}
    for s in frame.sorts:
        for u, v in sorted(frame.relations[s], key=lambda p: (order[p[0]], order[p[1]])):
            out.append(f"rel {s} {u} {v}")
    for s in frame.sorts:
        if frame.valuation[s]:
            out.append(f"val {s} " + " ".join(sorted(frame.valuation[s], key=order.get)))
    return "\n".join(out) + "\n"


# -- Graphviz ---------------------------------------------------------------

def _quote(s) -> str:
    return '"{}"'.format(str(s).replace("\\", "\\\\").replace('"', '\\"'))


def automaton_dot(aut, name="automaton") -> str:
    aut = stringify_states(aut)
    out = [f"digraph {_quote(name)} {{"]
    for q in aut.states:
        s = aut.sort_of[q]
        label = token(aut.observation(q))
        out.append(f"  {_quote(q)} [label={_quote(f'{q}:{s}:{label}')}];")
    for q in aut.states:
        for d in aut.sig.dir_names:
            if (q, d) in aut.step:
                out.append(f"  {_quote(q)} -> {_quote(aut.step[q, d])} [label={_quote(d)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def _truncation(tree, depth):
    """Yield ``(word, observation)`` in depth-first order down to ``depth``."""
    dirs = tree.sig.dir_names
    stack = [((), tree)]
    while stack:
        word, t = stack.pop()
        yield word, t.root
        if len(word) < depth:
            for d in reversed(dirs):
                stack.append((word + (d,), t.child(d)))


def tree_text(tree, depth: int) -> str:
    """Indented rendering of the depth-``depth`` truncation of a tree."""
    out = []
    for word, obs in _truncation(tree, depth):
        if not word:
            out.append(token(obs))
        else:
            out.append("  " * len(word) + f"{word[-1]}: {token(obs)}")
    return "\n".join(out) + "\n"


def tree_dot(tree, depth: int, name="tree") -> str:
    out = [f"digraph {_quote(name)} {{"]
    ids = {}
    for word, obs in _truncation(tree, depth):
        node = ids.setdefault(word, f"n{len(ids)}")
        out.append(f"  {node} [label={_quote(token(obs))}];")
        if word:
            out.append(f"  {ids[word[:-1]]} -> {node} [label={_quote(word[-1])}];")
    out.append("}")
    return "\n".join(out) + "\n"

