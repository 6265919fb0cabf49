"""Complete labelled trees (the final Q-coalgebra) and behavioural equivalence.

A ``LazyTree`` is a total map from words over the full alphabet to
observations, evaluated on demand.  Trees produced by ``behavior`` share one
node per automaton state, so depth-bounded walks over them memoise on node
identity and stay polynomial in the depth.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable

from .automata import AutMorphism, QAutomaton, _same_setting
from .errors import AutomatonError, SignatureError
from .signature import BOT, Direction, Label, Signature

_UNSET = object()


class LazyTree:
    """A demand-driven complete tree: ``t(word)`` is the observation at ``word``.

    Observations and children are memoised per node.  The functions a tree is
    built from must be pure; the memo is then invisible.
    """

    __slots__ = ("sig", "_observe", "_successor", "_label", "_children")

    def __init__(self, sig: Signature, observe: Callable[[], Any],
                 successor: Callable[[str], "LazyTree"]):
        self.sig = sig
        self._observe = observe
        self._successor = successor
        self._label = _UNSET
        self._children = {}

    @property
    def root(self):
        if self._label is _UNSET:
            self._label = self._observe()
        return self._label

    def child(self, d) -> "LazyTree":
        name = d.name if isinstance(d, Direction) else d
        t = self._children.get(name)
        if t is None:
            if name not in self.sig.dir_sort:
                raise SignatureError(f"unknown direction {name!r}")
            t = self._successor(name)
            self._children[name] = t
        return t

    def subtree(self, word) -> "LazyTree":
        t = self
        for d in word:
            t = t.child(d)
        return t

    def __call__(self, word=()):
        return self.subtree(word).root

    def __repr__(self):
        return f"<LazyTree root={self.root!r}>"


def bottom_tree(sig: Signature) -> LazyTree:
    """The tree labelled ``BOT`` everywhere."""
    t = LazyTree(sig, lambda: BOT, lambda d: t)
    return t


def behavior(aut: QAutomaton, q) -> LazyTree:
    """The image of state ``q`` in the final Q-coalgebra."""
    if q not in aut.sort_of:
        raise AutomatonError(f"unknown state {q!r}")
    nodes = {}

    def node(s):
        t = nodes.get(s)
        if t is None:
            t = LazyTree(aut.sig, lambda: aut.observation(s), lambda d: node(aut.step[s, d]))
            nodes[s] = t
        return t

    return node(q)


@dataclass(frozen=True)
class StepFunction:
    """A P-coalgebra given pointwise: ``fn(seed) -> (sort, label, {direction: seed})``.

    ``fn`` must be pure; trees unfolded from it may be shared between threads
    only under that contract.
    """

    sig: Signature
    fn: Callable

    def __call__(self, seed):
        sort, label, succ = self.fn(seed)
        sig = self.sig
        if sort not in sig.labels:
            raise SignatureError(f"step returned unknown sort {sort!r}")
        if label not in sig.labels[sort]:
            raise SignatureError(f"step returned label {label!r} outside sort {sort!r}")
        missing = [d for d in sig.dirs[sort] if d not in succ]
        if missing:
            raise SignatureError(f"step successor map misses directions {missing}")
        return sort, label, succ


def unfold_tree(step: StepFunction, seed) -> LazyTree:
    """Anamorphism of a step function into complete trees.

    Directions of the seed's own sort follow the step function; all other
    directions lead to the constantly-``BOT`` tree.
    """
    sig = step.sig
    bottom = bottom_tree(sig)
    nodes = {}

    def node(s):
        try:
            cached = nodes.get(s)
        except TypeError:  # unhashable seed: no sharing
            cached, hashable = None, False
        else:
            hashable = True
        if cached is not None:
            return cached
        result = []

        def evaluate():
            if not result:
                result.append(step(s))
            return result[0]

        def observe():
            sort, label, _ = evaluate()
            return Label(sort, label)

        def successor(d):
            sort, _, succ = evaluate()
            if sig.dir_sort[d] != sort:
                return bottom
            return node(succ[d])

        t = LazyTree(sig, observe, successor)
        if hashable:
            nodes[s] = t
        return t

    return node(seed)


def tree_eq_depth(t1: LazyTree, t2: LazyTree, n: int) -> bool:
    """Whether the trees agree on every word of length at most ``n``."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    if t1.sig != t2.sig:
        raise SignatureError("trees over different signatures")
    dirs = t1.sig.dir_names
    done = {}
    stack = [(t1, t2, n)]
    while stack:
        a, b, k = stack.pop()
        key = (id(a), id(b))
        prev = done.get(key)
        if prev is not None and prev[2] >= k:
            continue
        done[key] = (a, b, k)  # keeps both nodes alive so ids stay unique
        if a.root != b.root:
            return False
        if k:
            for d in dirs:
                stack.append((a.child(d), b.child(d), k - 1))
    return True


def clause_check(t: LazyTree, n: int, require_root: bool = False) -> bool:
    """Depth-``n`` membership of ``t`` in the sub-coalgebra of well-formed trees.

    Every node at depth below ``n`` labelled in sort ``j`` must have non-``BOT``
    children along ``dirs(j)`` and ``BOT`` children elsewhere; children of
    ``BOT`` nodes are ``BOT``.  With ``require_root`` the root must not be ``BOT``.
    """
    if n < 0:
        raise ValueError("depth must be non-negative")
    if require_root and t.root is BOT:
        return False
    sig = t.sig
    done = {}
    stack = [(t, n)]
    while stack:
        node, k = stack.pop()
        prev = done.get(id(node))
        if prev is not None and prev[1] >= k:
            continue
        done[id(node)] = (node, k)
        if k == 0:
            continue
        label = node.root
        for d in sig.alphabet:
            c = node.child(d.name)
            if label is BOT or d.sort != label.sort:
                if c.root is not BOT:
                    return False
            elif c.root is BOT:
                return False
            stack.append((c, k - 1))
    return True


# -- partition refinement ---------------------------------------------------

def _hopcroft(obs, step, nletters) -> list:
    """Coarsest partition refining ``obs`` and stable under every letter.

    Returns a block number per state, numbered by first occurrence.
    """
    n = len(obs)
    inverse = [[[] for _ in range(n)] for _ in range(nletters)]
    for q in range(n):
        row = step[q]
        for a in range(nletters):
            inverse[a][row[a]].append(q)
    first = {}
    block_of = [first.setdefault(o, len(first)) for o in obs]
    blocks = [set() for _ in first]
    for q, b in enumerate(block_of):
        blocks[b].add(q)
    largest = max(range(len(blocks)), key=lambda b: len(blocks[b]), default=None)
    pending = {(b, a) for b in range(len(blocks)) if b != largest for a in range(nletters)}
    work = deque(sorted(pending))
    while work:
        splitter = work.popleft()
        pending.discard(splitter)
        b, a = splitter
        pre = set()
        inv = inverse[a]
        for t in blocks[b]:
            pre.update(inv[t])
        touched = {}
        for q in pre:
            touched.setdefault(block_of[q], set()).add(q)
        for x, inside in touched.items():
            if len(inside) == len(blocks[x]):
                continue
            outside = blocks[x] - inside
            small, large = (inside, outside) if len(inside) <= len(outside) else (outside, inside)
            new = len(blocks)
            blocks[x] = large
            blocks.append(small)
            for q in small:
                block_of[q] = new
            for c in range(nletters):
                # whether or not (x, c) is pending, adding the smaller half suffices
                if (new, c) not in pending:
                    pending.add((new, c))
                    work.append((new, c))
    renumber = {}
    return [renumber.setdefault(b, len(renumber)) for b in block_of]


def bisimulation_classes(aut: QAutomaton) -> dict:
    """Map each state to the index of its bisimilarity class."""
    ix = aut._ix
    blocks = _hopcroft(ix.obs, ix.step, len(aut.sig.dir_names))
    return dict(zip(aut.states, blocks))


def bisimilar(aut_a: QAutomaton, qa, aut_b: QAutomaton, qb) -> bool:
    """Equality of behaviours, by refinement of the disjoint union."""
    _same_setting(aut_a, aut_b)
    ia, ib = aut_a._ix, aut_b._ix
    if qa not in ia.index or qb not in ib.index:
        raise AutomatonError("unknown state")
    off = len(ia.states)
    obs = ia.obs + ib.obs
    step = ia.step + tuple(tuple(t + off for t in row) for row in ib.step)
    blocks = _hopcroft(obs, step, len(aut_a.sig.dir_names))
    return blocks[ia.index[qa]] == blocks[off + ib.index[qb]]


def minimize(aut: QAutomaton):
    """Quotient by bisimilarity.

    Each class is named after its first member in state order.  Returns the
    quotient and the projection morphism.
    """
    classes = bisimulation_classes(aut)
    rep = {}
    for q in aut.states:
        rep.setdefault(classes[q], q)
    proj = {q: rep[classes[q]] for q in aut.states}
    quotient = aut.restrict(rep.values())
    quotient = QAutomaton(aut.sig, quotient.states, quotient.sort_of, quotient.label_of,
                          {(q, d): proj[t] for (q, d), t in quotient.step.items()})
    return quotient, AutMorphism(aut, quotient, proj)


def canonical_ranks(aut: QAutomaton) -> dict:
    """Rename-invariant ranks of states; equal ranks iff bisimilar.

    Ordered Moore refinement: each round sorts states by their current rank and
    the ranks of their successors in alphabet order.
    """
    ix = aut._ix
    order = sorted(set(ix.obs))
    rank = [order.index(o) for o in ix.obs]
    while True:
        keys = [(rank[q], tuple(rank[t] for t in ix.step[q])) for q in range(len(rank))]
        order = sorted(set(keys))
        pos = {k: i for i, k in enumerate(order)}
        new = [pos[k] for k in keys]
        if len(order) == len(set(rank)):
            break
        rank = new
    return dict(zip(aut.states, rank))


def canonical_form(aut: QAutomaton) -> tuple:
    """Hashable normal form of ``minimize(aut)``; equal iff the minimal quotients are isomorphic."""
    ranks = canonical_ranks(aut)
    table = {}
    for q in aut.states:
        r = ranks[q]
        if r not in table:
            table[r] = (aut._ix.obs[aut._ix.index[q]],
                        tuple(ranks[aut.step[q, d]] for d in aut.sig.dir_names))
    return tuple(table[r] for r in sorted(table))


def rooted_key(aut: QAutomaton, q) -> tuple:
    """Hashable key of the behaviour of ``q``: the canonical form of its reachable part."""
    sub = aut.restrict(reachable(aut, [q]))
    return canonical_form(sub), canonical_ranks(sub)[q]


def reachable(aut, roots) -> set:
    seen = set(roots)
    queue = deque(seen)
    dirs = aut.sig.dir_names
    while queue:
        q = queue.popleft()
        for d in dirs:
            t = aut.step.get((q, d))
            if t is not None and t not in seen:
                seen.add(t)
                queue.append(t)
    return seen
