"""Signatures of finitary polynomial functors.

A signature fixes, for every sort ``i``, a set of operation labels and a set
of directions (the arity of the operations of that sort).  Everything else in
the package is parametrised by one.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ParseError, SignatureError

SINK_SORT = "0"
BOT_TOKEN = "_bot_"

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_SORT = re.compile(r"[A-Za-z0-9_]+\Z")


class _Bottom:
    """The sink label.  There is exactly one instance, ``BOT``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOT"

    def __str__(self):
        return BOT_TOKEN

    def __reduce__(self):
        return (_Bottom, ())


BOT = _Bottom()


class Label(NamedTuple):
    """A non-sink observation: an operation label together with its sort."""

    sort: str
    name: str

    def __str__(self):
        return self.name


class Direction(NamedTuple):
    sort: str
    name: str

    def __str__(self):
        return self.name


def token(obs) -> str:
    """File/DOT token of an observation (a ``Label`` or ``BOT``)."""
    return BOT_TOKEN if obs is BOT else obs.name


@dataclass(frozen=True, eq=False)
class Signature:
    """Data ``(I, {labels_i}, {dirs_i})`` of ``P(X) = sum_i labels_i x X^dirs_i``.

    Sorts, labels and directions keep their declaration order, which is the
    canonical order used for iteration and serialisation everywhere.
    """

    sorts: tuple
    labels: Mapping[str, tuple] = field(repr=False)
    dirs: Mapping[str, tuple] = field(repr=False)

    def __post_init__(self):
        sorts = tuple(self.sorts)
        labels = {s: tuple(self.labels.get(s, ())) for s in sorts}
        dirs = {s: tuple(self.dirs.get(s, ())) for s in sorts}
        object.__setattr__(self, "sorts", sorts)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dirs", dirs)
        self._validate()

    def _validate(self):
        if not self.sorts:
            raise SignatureError("a signature needs at least one sort")
        seen = set()
        for s in self.sorts:
            if not isinstance(s, str) or not _SORT.match(s):
                raise SignatureError(f"bad sort identifier {s!r}")
            if s == SINK_SORT:
                raise SignatureError(f"sort identifier {SINK_SORT!r} is reserved for the sink")
            if s in seen:
                raise SignatureError(f"duplicate sort {s!r}")
            seen.add(s)
        for kind, table in (("label", self.labels), ("direction", self.dirs)):
            names = {}
            for s in self.sorts:
                if not table[s]:
                    raise SignatureError(f"sort {s!r} has no {kind}s")
                for name in table[s]:
                    if not isinstance(name, str) or not _IDENT.match(name):
                        raise SignatureError(f"bad {kind} name {name!r}")
                    if name == BOT_TOKEN:
                        raise SignatureError(f"{kind} name {BOT_TOKEN!r} is reserved")
                    if name in names:
                        raise SignatureError(
                            f"duplicate {kind} name {name!r} (sorts {names[name]!r} and {s!r})")
                    names[name] = s

    def _key(self):
        return (self.sorts, tuple(self.labels[s] for s in self.sorts),
                tuple(self.dirs[s] for s in self.sorts))

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        body = "; ".join(
            f"{s}: {' '.join(self.labels[s])} / {' '.join(self.dirs[s])}" for s in self.sorts)
        return f"Signature({body})"

    @cached_property
    def alphabet(self) -> tuple:
        return tuple(Direction(s, d) for s in self.sorts for d in self.dirs[s])

    @cached_property
    def dir_names(self) -> tuple:
        return tuple(d.name for d in self.alphabet)

    @cached_property
    def dir_sort(self) -> dict:
        return {d.name: d.sort for d in self.alphabet}

    @cached_property
    def label_sort(self) -> dict:
        return {name: s for s in self.sorts for name in self.labels[s]}

    @cached_property
    def omega(self) -> tuple:
        """All observations: ``BOT`` followed by every label in canonical order."""
        return (BOT,) + tuple(Label(s, name) for s in self.sorts for name in self.labels[s])

    def direction(self, name) -> Direction:
        if isinstance(name, Direction):
            name = name.name
        try:
            return Direction(self.dir_sort[name], name)
        except KeyError:
            raise SignatureError(f"unknown direction {name!r}") from None

    def label(self, name) -> Label:
        try:
            return Label(self.label_sort[name], name)
        except KeyError:
            raise SignatureError(f"unknown label {name!r}") from None

    def word(self, word: Iterable) -> tuple:
        """Normalise a word (directions or their names) to a tuple of names."""
        out = []
        for d in word:
            name = d.name if isinstance(d, Direction) else d
            if name not in self.dir_sort:
                raise SignatureError(f"unknown direction {name!r} in word")
            out.append(name)
        return tuple(out)


def full_alphabet(sig: Signature) -> list:
    """All directions, sorted by sort then declaration order."""
    return list(sig.alphabet)


def make_signature(spec: Mapping[str, tuple]) -> Signature:
    """Shorthand: ``make_signature({"1": (["f"], ["f1"]), ...})``."""
    return Signature(tuple(spec), {s: v[0] for s, v in spec.items()},
                     {s: v[1] for s, v in spec.items()})


def strip_comment(line: str) -> list:
    return line.split("#", 1)[0].split()


def content_lines(text: str):
    """Yield ``(lineno, tokens)`` for every non-blank, non-comment line."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = strip_comment(line)
        if toks:
            yield lineno, toks


def load_signature(text: str) -> Signature:
    lines = list(content_lines(text))
    if not lines or lines[0][1] != ["sig"]:
        raise ParseError("expected header 'sig'", lines[0][0] if lines else 1)
    sorts, labels, dirs = [], {}, {}
    expect = "sort"
    current = None
    for lineno, toks in lines[1:]:
        head, args = toks[0], toks[1:]
        if head != expect:
            raise ParseError(f"expected '{expect}', got '{head}'", lineno)
        if head == "sort":
            if len(args) != 1:
                raise ParseError("'sort' takes exactly one name", lineno)
            current = args[0]
            if current in labels:
                raise ParseError(f"duplicate sort {current!r}", lineno)
            sorts.append(current)
            labels[current] = ()
            expect = "labels"
        elif head == "labels":
            if not args:
                raise ParseError(f"sort {current!r} declares no labels", lineno)
            labels[current] = tuple(args)
            expect = "dirs"
        else:
            if not args:
                raise ParseError(f"sort {current!r} declares no directions", lineno)
            dirs[current] = tuple(args)
            expect = "sort"
    if expect != "sort":
        raise ParseError(f"sort {current!r} is incomplete: missing '{expect}'",
                         lines[-1][0])
    return Signature(tuple(sorts), labels, dirs)


def render_signature(sig: Signature) -> str:
    out = ["sig"]
    for s in sig.sorts:
        out.append(f"sort {s}")
        out.append("labels " + " ".join(sig.labels[s]))
        out.append("dirs " + " ".join(sig.dirs[s]))
    return "\n".join(out) + "\n"


def words_upto(sig: Signature, n: int) -> Sequence[tuple]:
    """All words of length <= n over the full alphabet, in shortlex order."""
    out = [()]
    layer = [()]
    for _ in range(n):
        layer = [w + (d,) for w in layer for d in sig.dir_names]
        out.extend(layer)
    return out
