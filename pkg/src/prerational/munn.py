"""The free inverse monoid, represented by Munn bi-rooted trees.

A signed generator is a pair ``(name, bar)``; a reduced word is a tuple of
them with no adjacent inverse pair.  An element is a prefix-closed set of
reduced words (the tree nodes, addressed from the initial root) together
with the reduced word of the final root.

Two-way words and ranked trees are encoded over extended alphabets whose
extra letters are ordinary generators: ``B`` (left end marker), ``E``
(right end marker), ``_`` (below a leaf), ``<T,a>`` (root labelled a) and
``<i,a>`` (i-th child labelled a).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .monoid import Monoid
from .semiring import LiteralError

Letter = tuple  # (name, bar)
LEFT_END = "B"
RIGHT_END = "E"
BOTTOM = "_"

_TOKEN = re.compile(r"\s*(~?)(<[^<>]*>|[^\s~<>]+)")


def inverse_letter(letter: Letter) -> Letter:
    return (letter[0], not letter[1])


def reduce(word: Iterable[Letter]) -> tuple:
    """Cancel adjacent inverse pairs (free-group reduction)."""
    out: list[Letter] = []
    for letter in word:
        if out and out[-1] == inverse_letter(letter):
            out.pop()
        else:
            out.append(tuple(letter))
    return tuple(out)


def word_inverse(word: Sequence[Letter]) -> tuple:
    return tuple(inverse_letter(x) for x in reversed(word))


def _join(u: tuple, v: tuple) -> tuple:
    # u, v reduced: only the seam can cancel
    k = 0
    while k < len(u) and k < len(v) and u[len(u) - 1 - k] == inverse_letter(v[k]):
        k += 1
    return u[: len(u) - k] + v[k:]


@dataclass(frozen=True)
class MunnTree:
    nodes: frozenset
    final: tuple

    @property
    def is_idempotent(self) -> bool:
        return not self.final


IDENTITY = MunnTree(frozenset({()}), ())


def from_word(word: Iterable[Letter]) -> MunnTree:
    """Element read by walking ``word`` from the initial root."""
    current: tuple = ()
    nodes = {current}
    for letter in word:
        current = _join(current, (tuple(letter),))
        nodes.add(current)
    return MunnTree(frozenset(nodes), current)


def product(x: MunnTree, y: MunnTree) -> MunnTree:
    f = x.final
    nodes = set(x.nodes)
    nodes.update(_join(f, q) for q in y.nodes)
    return MunnTree(frozenset(nodes), _join(f, y.final))


def translate(nodes: Iterable[tuple], by: tuple) -> frozenset:
    return frozenset(_join(by, q) for q in nodes)


def inverse(x: MunnTree) -> MunnTree:
    finv = word_inverse(x.final)
    return MunnTree(translate(x.nodes, finv), finv)


def subtrees(nodes: frozenset) -> list[frozenset]:
    """All prefix-closed subsets of ``nodes`` that contain the root."""
    children: dict[tuple, list[tuple]] = {}
    for n in nodes:
        if n:
            children.setdefault(n[:-1], []).append(n)

    def grow(n: tuple) -> list[frozenset]:
        options = [frozenset({n})]
        for c in sorted(children.get(n, ())):
            with_child = grow(c)
            options = [o | s for o in options for s in [frozenset()] + with_child]
        return options

    return grow(())


def prefixes(x: MunnTree) -> set[MunnTree]:
    return {MunnTree(t, v) for t in subtrees(x.nodes) for v in t}


def is_prefix(p: MunnTree, m: MunnTree) -> bool:
    return p.nodes <= m.nodes


def completions(p: MunnTree, m: MunnTree) -> list[MunnTree]:
    """Every s with p·s = m."""
    if not is_prefix(p, m):
        return []
    finv = word_inverse(p.final)
    region = translate(m.nodes, finv)
    goal = _join(finv, m.final)
    required = translate(m.nodes - p.nodes, finv) | {goal}
    return [MunnTree(t, goal) for t in subtrees(region) if required <= t]


def walk(x: MunnTree) -> list[Letter]:
    """A word whose walk reads exactly ``x``; the path to the final node is taken last."""
    children: dict[tuple, list[tuple]] = {}
    for n in x.nodes:
        if n:
            children.setdefault(n[:-1], []).append(n)
    order = {n: i for i, n in enumerate(sorted(x.nodes))}

    def round_trip(n: tuple) -> list[Letter]:
        out: list[Letter] = []
        for c in sorted(children.get(n, ()), key=order.__getitem__):
            out.append(c[-1])
            out.extend(round_trip(c))
            out.append(inverse_letter(c[-1]))
        return out

    out: list[Letter] = []
    f = x.final
    for depth in range(len(f) + 1):
        here = f[:depth]
        nxt = f[: depth + 1] if depth < len(f) else None
        for c in sorted(children.get(here, ()), key=order.__getitem__):
            if c == nxt:
                continue
            out.append(c[-1])
            out.extend(round_trip(c))
            out.append(inverse_letter(c[-1]))
        if nxt is not None:
            out.append(nxt[-1])
    return out


def format_letter(letter: Letter) -> str:
    return ("~" if letter[1] else "") + letter[0]


def parse_word(text: str, generators: Sequence[str] | None = None) -> list[Letter]:
    """Parse ``a ~b <0,c> eps`` style words into signed letters."""
    text = text.strip()
    if text in ("", "eps"):
        return []
    out: list[Letter] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise LiteralError(f"bad free-inverse-monoid word at position {pos}: {text!r}")
        name = m.group(2)
        if name == "eps" and not m.group(1):
            pos = m.end()
            continue
        if generators is not None and name not in generators:
            raise LiteralError(f"unknown generator {name!r} (have {list(generators)})")
        out.append((name, bool(m.group(1))))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def two_way_alphabet(letters: Sequence[str]) -> list[str]:
    return list(letters) + [LEFT_END, RIGHT_END]


def tree_alphabet(arity: int, labels: Sequence[str]) -> list[str]:
    out = [f"<T,{a}>" for a in labels]
    out += [f"<{i},{a}>" for i in range(arity) for a in labels]
    return out + [BOTTOM]


def encode_word(word: Sequence[str]) -> MunnTree:
    """Linear tree of the two-way input ``⊢ word ⊣``."""
    letters = [(LEFT_END, False)] + [(a, False) for a in word] + [(RIGHT_END, False)]
    return from_word(letters)


@dataclass(frozen=True)
class RankedTree:
    label: str
    children: tuple = ()


class ArityError(ValueError):
    pass


def tree_walk(tree: RankedTree, arity: int) -> list[Letter]:
    """Depth-first walk of the encoding, starting and ending above the root."""

    def visit(node: RankedTree) -> list[Letter]:
        if len(node.children) > arity:
            raise ArityError(f"node {node.label!r} has {len(node.children)} children, arity is {arity}")
        if not node.children:
            return [(BOTTOM, False), (BOTTOM, True)]
        out: list[Letter] = []
        for i, child in enumerate(node.children):
            edge = (f"<{i},{child.label}>", False)
            out.append(edge)
            out.extend(visit(child))
            out.append(inverse_letter(edge))
        return out

    root = (f"<T,{tree.label}>", False)
    return [root] + visit(tree) + [inverse_letter(root)]


def encode_tree(tree: RankedTree, arity: int) -> MunnTree:
    return from_word(tree_walk(tree, arity))


def parse_tree(text: str) -> RankedTree:
    """Parse ``a(b,c(d,d))``; labels are alphanumeric."""
    pos = 0

    def node() -> RankedTree:
        nonlocal pos
        m = re.compile(r"\s*([A-Za-z0-9]+)\s*").match(text, pos)
        if not m:
            raise LiteralError(f"expected tree label at position {pos} in {text!r}")
        pos = m.end()
        kids: list[RankedTree] = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            kids.append(node())
            while pos < len(text) and text[pos] == ",":
                pos += 1
                kids.append(node())
            if pos >= len(text) or text[pos] != ")":
                raise LiteralError(f"expected ')' at position {pos} in {text!r}")
            pos += 1
            while pos < len(text) and text[pos].isspace():
                pos += 1
        return RankedTree(m.group(1), tuple(kids))

    t = node()
    if pos != len(text):
        raise LiteralError(f"trailing input at position {pos} in {text!r}")
    return t


def tree_arity(tree: RankedTree) -> int:
    return max([len(tree.children)] + [tree_arity(c) for c in tree.children])


_DISPLAY = {LEFT_END: "⊢", RIGHT_END: "⊣", BOTTOM: "⊥"}


def display_name(name: str) -> str:
    if name in _DISPLAY:
        return _DISPLAY[name]
    m = re.fullmatch(r"<(T|\d+),(.*)>", name)
    if m:
        return f"({'⊤' if m.group(1) == 'T' else m.group(1)},{m.group(2)})"
    return name


class FreeInverseMonoid(Monoid):
    """Free inverse monoid over a finite alphabet, elements are :class:`MunnTree`."""

    identity = IDENTITY

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generators")
        self.spec = "fim:" + ",".join(self.generators)
        self._rank = {g: i for i, g in enumerate(self.generators)}

    def letter_key(self, letter: Letter):
        return (self._rank.get(letter[0], len(self._rank)), letter[0], letter[1])

    def node_key(self, node: tuple):
        return tuple(self.letter_key(x) for x in node)

    def product(self, x, y):
        return product(x, y)

    def inverse(self, x):
        return inverse(x)

    def prefixes(self, m):
        return prefixes(m)

    def is_prefix(self, p, m):
        return is_prefix(p, m)

    def completions(self, p, m):
        return completions(p, m)

    def from_word(self, word: Iterable[Letter]) -> MunnTree:
        word = list(word)
        for name, _ in word:
            if name not in self._rank:
                raise LiteralError(f"unknown generator {name!r} (have {list(self.generators)})")
        return from_word(word)

    def parse_literal(self, text):
        return from_word(parse_word(text, self.generators))

    def parse_atom(self, token):
        letters = parse_word(token, self.generators)
        if len(letters) > 1:
            raise LiteralError(f"atom {token!r} is not a single signed generator")
        return from_word(letters)

    def atom_tokens(self, x):
        return [format_letter(a) for a in walk(x)]

    def render(self, x):
        return " ".join(self.atom_tokens(x)) or "eps"

    def sorted_nodes(self, x: MunnTree) -> list[tuple]:
        return sorted(x.nodes, key=self.node_key)

    def to_dot(self, x: MunnTree, name: str = "munn") -> str:
        return to_dot(x, self, name)


def to_dot(x: MunnTree, monoid: FreeInverseMonoid | None = None, name: str = "munn") -> str:
    """DOT digraph of a Munn tree: edges point along positive letters."""
    key = monoid.node_key if monoid is not None else None
    nodes = sorted(x.nodes, key=key)
    ids = {n: f"n{i}" for i, n in enumerate(nodes)}
    lines = [f"digraph {name} {{", '  node [shape=circle, label="", width=0.15];']
    lines.append('  init [shape=none, label="", width=0];')
    for n in nodes:
        shape = ", shape=doublecircle" if n == x.final else ""
        lines.append(f"  {ids[n]} [tooltip=\"{' '.join(map(format_letter, n)) or 'eps'}\"{shape}];")
    lines.append(f"  init -> {ids[()]} [arrowhead=none];")
    for n in nodes:
        if not n:
            continue
        gen, bar = n[-1]
        parent = n[:-1]
        src, dst = (ids[n], ids[parent]) if bar else (ids[parent], ids[n])
        lines.append(f'  {src} -> {dst} [label="{display_name(gen)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
