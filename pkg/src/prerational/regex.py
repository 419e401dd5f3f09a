"""Rational languages kept as normalized regular-expression trees.

Values are built through smart constructors that normalize union up to
associativity, commutativity and idempotence, which keeps the set of
Brzozowski derivatives of any value finite.  Equality of languages is
decided by a bisimulation over derivative pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable


class Lang:
    """Base class of normalized regex nodes."""

    __slots__ = ()

    def __add__(self, other: "Lang") -> "Lang":
        return union(self, other)

    def __mul__(self, other: "Lang") -> "Lang":
        return concat(self, other)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Empty(Lang):
    pass


@dataclass(frozen=True)
class Eps(Lang):
    pass


@dataclass(frozen=True)
class Sym(Lang):
    symbol: str


@dataclass(frozen=True)
class Alt(Lang):
    items: frozenset


@dataclass(frozen=True)
class Cat(Lang):
    items: tuple


@dataclass(frozen=True)
class Rep(Lang):
    body: Lang


EMPTY = Empty()
EPS = Eps()


def union(*parts: Lang) -> Lang:
    items: set[Lang] = set()
    for p in parts:
        if isinstance(p, Alt):
            items |= p.items
        elif not isinstance(p, Empty):
            items.add(p)
    if not items:
        return EMPTY
    if len(items) == 1:
        return next(iter(items))
    return Alt(frozenset(items))


def concat(*parts: Lang) -> Lang:
    items: list[Lang] = []
    for p in parts:
        if isinstance(p, Empty):
            return EMPTY
        if isinstance(p, Eps):
            continue
        if isinstance(p, Cat):
            items.extend(p.items)
        else:
            items.append(p)
    if not items:
        return EPS
    if len(items) == 1:
        return items[0]
    return Cat(tuple(items))


def star(r: Lang) -> Lang:
    if isinstance(r, (Empty, Eps)):
        return EPS
    if isinstance(r, Rep):
        return r
    return Rep(r)


def nullable(r: Lang) -> bool:
    if isinstance(r, (Eps, Rep)):
        return True
    if isinstance(r, (Empty, Sym)):
        return False
    if isinstance(r, Alt):
        return any(nullable(x) for x in r.items)
    return all(nullable(x) for x in r.items)


def derivative(r: Lang, a: str) -> Lang:
    if isinstance(r, (Empty, Eps)):
        return EMPTY
    if isinstance(r, Sym):
        return EPS if r.symbol == a else EMPTY
    if isinstance(r, Alt):
        return union(*(derivative(x, a) for x in r.items))
    if isinstance(r, Rep):
        return concat(derivative(r.body, a), r)
    head, rest = r.items[0], concat(*r.items[1:])
    d = concat(derivative(head, a), rest)
    if nullable(head):
        d = union(d, derivative(rest, a))
    return d


def symbols(r: Lang) -> set[str]:
    if isinstance(r, Sym):
        return {r.symbol}
    if isinstance(r, Alt):
        return set().union(*(symbols(x) for x in r.items))
    if isinstance(r, Cat):
        return set().union(*(symbols(x) for x in r.items))
    if isinstance(r, Rep):
        return symbols(r.body)
    return set()


def language_eq(x: Lang, y: Lang, alphabet: Iterable[str]) -> bool:
    """Decide L(x) == L(y) over the given alphabet.

    Raises ValueError when either value mentions a symbol outside it.
    """
    alphabet = tuple(alphabet)
    stray = (symbols(x) | symbols(y)) - set(alphabet)
    if stray:
        raise ValueError(f"symbols {sorted(stray)} not in alphabet {list(alphabet)}")
    seen = {(x, y)}
    todo = [(x, y)]
    while todo:
        r, s = todo.pop()
        if nullable(r) != nullable(s):
            return False
        for a in alphabet:
            pair = (derivative(r, a), derivative(s, a))
            if pair not in seen:
                seen.add(pair)
                todo.append(pair)
    return True


def matches(r: Lang, word: Iterable[str]) -> bool:
    for a in word:
        r = derivative(r, a)
    return nullable(r)


_PREC = {Alt: 0, Cat: 1, Rep: 2}


def render(r: Lang) -> str:
    if isinstance(r, Empty):
        return "empty"
    if isinstance(r, Eps):
        return "eps"
    if isinstance(r, Sym):
        return r.symbol

    def sub(x: Lang, level: int) -> str:
        text = render(x)
        if _PREC.get(type(x), 3) < level:
            return f"({text})"
        return text

    if isinstance(r, Alt):
        return "+".join(sorted(sub(x, 0) for x in r.items))
    if isinstance(r, Cat):
        return ".".join(sub(x, 2) for x in r.items)
    return sub(r.body, 3) + "*"


class RegexSyntaxError(ValueError):
    pass


def parse(text: str, alphabet: Iterable[str]) -> Lang:
    """Parse ``+ . * ( ) eps empty`` regexes; juxtaposition also concatenates.

    Symbols are matched longest-first against the alphabet.
    """
    alphabet = sorted(alphabet, key=len, reverse=True)
    tokens: list[tuple[str, str, int]] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+.*()":
            tokens.append((c, c, i))
            i += 1
            continue
        m = re.match(r"(eps|empty)(?![A-Za-z0-9_])", text[i:])
        if m:
            tokens.append(("kw", m.group(1), i))
            i += len(m.group(1))
            continue
        for a in alphabet:
            if text.startswith(a, i):
                tokens.append(("sym", a, i))
                i += len(a)
                break
        else:
            raise RegexSyntaxError(f"unknown symbol at position {i} in {text!r}")
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(kind):
        nonlocal pos
        if peek() != kind:
            where = tokens[pos][2] if pos < len(tokens) else len(text)
            raise RegexSyntaxError(f"expected {kind!r} at position {where} in {text!r}")
        pos += 1
        return tokens[pos - 1]

    def expr():
        parts = [term()]
        while peek() == "+":
            take("+")
            parts.append(term())
        return union(*parts)

    def term():
        parts = [factor()]
        while peek() in (".", "(", "sym", "kw"):
            if peek() == ".":
                take(".")
            parts.append(factor())
        return concat(*parts)

    def factor():
        kind = peek()
        if kind == "(":
            take("(")
            r = expr()
            take(")")
        elif kind == "sym":
            r = Sym(take("sym")[1])
        elif kind == "kw":
            r = EPS if take("kw")[1] == "eps" else EMPTY
        else:
            where = tokens[pos][2] if pos < len(tokens) else len(text)
            raise RegexSyntaxError(f"unexpected token at position {where} in {text!r}")
        while peek() == "*":
            take("*")
            r = star(r)
        return r

    r = expr()
    if pos != len(tokens):
        raise RegexSyntaxError(f"trailing input at position {tokens[pos][2]} in {text!r}")
    return r
