"""Weighted expressions: AST, parser, renderer and the indexing transforms.

Grammar (``[...]`` holds a semiring literal, bare tokens are monoid atoms)::

    expr   := term {"+" term}
    term   := factor {"." factor}
    factor := atom {"*"}
    atom   := "(" expr ")" | "[" semiring-literal "]" | monoid-literal

Semantics is compile-then-evaluate (see :mod:`prerational.kleene`);
:func:`evaluate_oracle` evaluates the inductive definition directly and is
meant for cross-checking only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Iterator

from .monoid import DEFAULT_BUDGET, Monoid, NonTerminating
from .semiring import COUNTING, LiteralError, ProductSemiring, Semiring


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Weight(Expr):
    value: Any


@dataclass(frozen=True)
class Atom(Expr):
    element: Any


@dataclass(frozen=True)
class Sum(Expr):
    items: tuple


@dataclass(frozen=True)
class Product(Expr):
    items: tuple


@dataclass(frozen=True)
class Star(Expr):
    body: Expr


@dataclass(frozen=True)
class Indexed(Expr):
    """A leaf of an indexed expression."""

    leaf: Expr
    index: int


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# parsing

_ATOM = re.compile(r"~?(<[^<>\s]*>|[A-Za-z0-9_]+)")


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()+.*":
            yield (c, c, i)
            i += 1
        elif c == "[":
            depth, j = 0, i
            while j < len(text):
                depth += (text[j] == "[") - (text[j] == "]")
                if depth == 0:
                    break
                j += 1
            if depth:
                raise ExpressionSyntaxError("unclosed '['", i)
            yield ("weight", text[i + 1 : j], i)
            i = j + 1
        else:
            m = _ATOM.match(text, i)
            if not m:
                raise ExpressionSyntaxError(f"unexpected character {c!r}", i)
            yield ("atom", m.group(0), i)
            i = m.end()


def parse(text: str, semiring: Semiring, monoid: Monoid) -> Expr:
    toks = list(_tokens(text))
    pos = 0

    def where() -> int:
        return toks[pos][2] if pos < len(toks) else len(text)

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def expect(kind):
        nonlocal pos
        if peek() != kind:
            raise ExpressionSyntaxError(f"expected {kind!r}", where())
        pos += 1

    def expr():
        items = [term()]
        while peek() == "+":
            expect("+")
            items.append(term())
        return items[0] if len(items) == 1 else Sum(tuple(items))

    def term():
        items = [factor()]
        while peek() == ".":
            expect(".")
            items.append(factor())
        return items[0] if len(items) == 1 else Product(tuple(items))

    def factor():
        nonlocal pos
        kind = peek()
        if kind == "(":
            expect("(")
            node = expr()
            expect(")")
        elif kind in ("weight", "atom"):
            _, value, at = toks[pos]
            pos += 1
            try:
                if kind == "weight":
                    node = Weight(semiring.parse_literal(value))
                elif value == "eps":
                    node = Atom(monoid.identity)
                else:
                    node = Atom(monoid.parse_atom(value))
            except (LiteralError, ValueError) as exc:
                raise ExpressionSyntaxError(str(exc), at) from exc
        else:
            raise ExpressionSyntaxError("expected an atom, a weight or '('", where())
        while peek() == "*":
            expect("*")
            node = Star(node)
        return node

    if not toks:
        raise ExpressionSyntaxError("empty expression", 0)
    node = expr()
    if pos != len(toks):
        raise ExpressionSyntaxError("trailing input", where())
    return node


# rendering

def _level(node: Expr, monoid: Monoid | None) -> int:
    if isinstance(node, Sum):
        return 0
    if isinstance(node, Product):
        return 1
    if isinstance(node, Atom) and monoid is not None and len(monoid.atom_tokens(node.element)) > 1:
        return 1
    if isinstance(node, Star):
        return 2
    return 3


def _render(node: Expr, leaf: Callable[[Expr], str], monoid: Monoid | None) -> str:
    def sub(child: Expr, need: int) -> str:
        text = _render(child, leaf, monoid)
        return f"({text})" if _level(child, monoid) < need else text

    if isinstance(node, Sum):
        return "+".join(sub(c, 1) for c in node.items)
    if isinstance(node, Product):
        return ".".join(sub(c, 2) for c in node.items)
    if isinstance(node, Star):
        return sub(node.body, 2) + "*"
    return leaf(node)


def render(node: Expr, semiring: Semiring, monoid: Monoid) -> str:
    """Text in the parser's grammar; ``parse(render(W))`` denotes the same series."""

    def leaf(n):
        if isinstance(n, Weight):
            return f"[{semiring.render(n.value)}]"
        if isinstance(n, Atom):
            return ".".join(monoid.atom_tokens(n.element)) or "eps"
        return leaf(n.leaf)

    return _render(node, leaf, monoid)


def render_indexed(node: Expr, semiring: Semiring, monoid: Monoid) -> str:
    """Render leaves as ``(value,index)`` pairs."""

    def leaf(n):
        if isinstance(n.leaf, Weight):
            text = semiring.render(n.leaf.value)
        else:
            text = monoid.render(n.leaf.element)
        return f"({text},{n.index})"

    return _render(node, leaf, None)


# structural transforms

def leaves(node: Expr) -> list[Expr]:
    if isinstance(node, (Sum, Product)):
        return [x for c in node.items for x in leaves(c)]
    if isinstance(node, Star):
        return leaves(node.body)
    return [node]


def size(node: Expr) -> int:
    if isinstance(node, (Sum, Product)):
        return 1 + sum(size(c) for c in node.items)
    if isinstance(node, Star):
        return 1 + size(node.body)
    return 1


def map_leaves(node: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    if isinstance(node, Sum):
        return Sum(tuple(map_leaves(c, fn) for c in node.items))
    if isinstance(node, Product):
        return Product(tuple(map_leaves(c, fn) for c in node.items))
    if isinstance(node, Star):
        return Star(map_leaves(node.body, fn))
    return fn(node)


def mark_unambiguous(node: Expr, one: Any) -> Expr:
    """Rewrite every ``U*`` into ``(U')*·1``; the series is unchanged."""
    if isinstance(node, Sum):
        return Sum(tuple(mark_unambiguous(c, one) for c in node.items))
    if isinstance(node, Product):
        return Product(tuple(mark_unambiguous(c, one) for c in node.items))
    if isinstance(node, Star):
        return Product((Star(mark_unambiguous(node.body, one)), Weight(one)))
    return node


def index(node: Expr) -> Expr:
    """Tag leaves with consecutive indices, left to right from 0."""
    counter = iter(range(len(leaves(node))))
    return map_leaves(node, lambda leaf: Indexed(leaf, next(counter)))


def erase(node: Expr) -> Expr:
    return map_leaves(node, lambda leaf: leaf.leaf if isinstance(leaf, Indexed) else leaf)


def with_weights(node: Expr, fn: Callable[[Any], Any]) -> Expr:
    """Apply ``fn`` to every weight leaf."""
    return map_leaves(node, lambda leaf: Weight(fn(leaf.value)) if isinstance(leaf, Weight) else leaf)


def lift_product(node: Expr, semiring: Semiring) -> tuple[Expr, ProductSemiring]:
    """Pair every weight k with 1 ∈ N∞."""
    return with_weights(node, lambda k: (k, 1)), ProductSemiring(semiring, COUNTING)


# semantics

def evaluate(node: Expr, m, semiring: Semiring, monoid: Monoid, budget: int = DEFAULT_BUDGET):
    from . import automaton, kleene

    return automaton.evaluate(kleene.to_automaton(node, semiring, monoid), m, budget=budget)


def ambiguity(node: Expr, m, monoid: Monoid, budget: int = DEFAULT_BUDGET):
    """Number of decompositions of ``m`` in ``node`` (weights replaced by 1 in N∞)."""
    return evaluate(with_weights(node, lambda _: 1), m, COUNTING, monoid, budget=budget)


class _DivergedType:
    def __repr__(self):
        return "DIVERGED"


DIVERGED = _DivergedType()


class _Diverged(Exception):
    pass


def evaluate_oracle(node: Expr, m, semiring: Semiring, monoid: Monoid, depth: int = 64):
    """Evaluate the inductive semantics directly, or return :data:`DIVERGED`.

    Cauchy products sum over all factorizations.  A star is summed power by
    power on the finite set of right factors of the target, and stops only
    on exact grounds: the power vector vanishes, it becomes a right scalar
    multiple ``P·r`` of the previous one (tail ``P·star(r)``), or it repeats
    in an idempotent semiring.  ``depth`` bounds the number of powers.
    """
    K = semiring
    idempotent = K.eq(K.add(K.one, K.one), K.one)
    memo: dict = {}
    facts: dict = {}

    def factorizations(x):
        if x not in facts:
            facts[x] = monoid.factorizations(x)
        return facts[x]

    def sem(n: Expr, x):
        key = (id(n), x)
        if key not in memo:
            memo[key] = _sem(n, x)
        return memo[key]

    def _sem(n: Expr, x):
        if isinstance(n, Indexed):
            return sem(n.leaf, x)
        if isinstance(n, Weight):
            return n.value if x == monoid.identity else K.zero
        if isinstance(n, Atom):
            return K.one if x == n.element else K.zero
        if isinstance(n, Sum):
            return K.sum(sem(c, x) for c in n.items)
        if isinstance(n, Product):
            return chain(n, 0, x)
        return star_at(n.body, x)

    def chain(n: Product, k: int, x):
        if k == len(n.items) - 1:
            return sem(n.items[k], x)
        key = (id(n), k, x)
        if key not in memo:
            total = K.zero
            for x1, x2 in factorizations(x):
                left = sem(n.items[k], x1)
                if K.is_zero(left):
                    continue
                total = K.add(total, K.mul(left, chain(n, k + 1, x2)))
            memo[key] = total
        return memo[key]

    def star_at(body: Expr, x):
        region = sorted({y for _, y in factorizations(x)}, key=repr)
        power = {y: K.one if y == monoid.identity else K.zero for y in region}
        total = dict(power)
        seen = [power]
        for _ in range(depth):
            nxt = {}
            for y in region:
                acc = K.zero
                for y1, y2 in factorizations(y):
                    if K.is_zero(power[y2]):
                        continue
                    acc = K.add(acc, K.mul(sem(body, y1), power[y2]))
                nxt[y] = acc
            if all(K.is_zero(v) for v in nxt.values()):
                return total[x]
            ratio = _right_ratio(K, power, nxt)
            if ratio is not None:
                return K.add(total[x], K.mul(nxt[x], K.star(ratio)))
            if idempotent and any(all(K.eq(old[y], nxt[y]) for y in region) for old in seen):
                return total[x]
            for y in region:
                total[y] = K.add(total[y], nxt[y])
            seen.append(nxt)
            power = nxt
        raise _Diverged

    try:
        return sem(node, m)
    except (_Diverged, NonTerminating):
        return DIVERGED


def _right_ratio(K: Semiring, prev: dict, cur: dict):
    ratio = None
    for y, p in prev.items():
        if not K.is_zero(p):
            ratio = K.right_divide(cur[y], p)
            break
    if ratio is None:
        return None
    for y, p in prev.items():
        if not K.eq(K.mul(p, ratio), cur[y]):
            return None
    return ratio
