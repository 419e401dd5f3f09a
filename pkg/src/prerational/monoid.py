"""Effectively pre-rational monoids and the preimage DFA built from prefixes.

A monoid here is an object exposing ``identity``, ``product``,
``is_prefix`` / ``prefixes`` and literal handling.  Elements must be
hashable canonical values so structural equality is monoid equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Optional, Sequence

from .semiring import INF, Infinity, LiteralError, split_top_level

DEFAULT_BUDGET = 100_000


class NonTerminating(RuntimeError):
    """Prefix enumeration exceeded its state budget."""


class Monoid:
    identity: Hashable
    spec: str

    def product(self, x, y):
        raise NotImplementedError

    def product_all(self, elements: Iterable):
        acc = self.identity
        for e in elements:
            acc = self.product(acc, e)
        return acc

    def eq(self, x, y) -> bool:
        return x == y

    def prefixes(self, m) -> set:
        raise NotImplementedError

    def is_prefix(self, p, m) -> bool:
        return p in self.prefixes(m)

    def completions(self, p, m) -> list:
        """All s with product(p, s) == m."""
        raise NotImplementedError

    def factorizations(self, m) -> list[tuple[Any, Any]]:
        """All pairs (x, y) with product(x, y) == m."""
        return [(p, s) for p in self.prefixes(m) for s in self.completions(p, m)]

    def parse_literal(self, text: str):
        raise NotImplementedError

    def render(self, x) -> str:
        raise NotImplementedError

    def atom_tokens(self, x) -> list[str]:
        """Expression tokens whose product is ``x`` (empty for the identity)."""
        raise NotImplementedError

    def parse_atom(self, token: str):
        """Element denoted by a single expression atom token."""
        return self.parse_literal(token)

    def __repr__(self) -> str:
        return f"<monoid {self.spec}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Monoid) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)


class FreeMonoid(Monoid):
    """Words over a finite alphabet, stored as tuples of generator names."""

    identity = ()

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(generators)
        self.spec = "free:" + ",".join(self.generators)

    def product(self, x, y):
        return x + y

    def prefixes(self, m):
        return {m[:i] for i in range(len(m) + 1)}

    def is_prefix(self, p, m):
        return m[: len(p)] == p

    def completions(self, p, m):
        return [m[len(p):]] if self.is_prefix(p, m) else []

    def parse_literal(self, text):
        tokens = text.split()
        if tokens == ["eps"]:
            return ()
        for t in tokens:
            if t not in self.generators:
                raise LiteralError(f"unknown generator {t!r} (have {list(self.generators)})")
        return tuple(tokens)

    def render(self, x):
        return " ".join(x) if x else "eps"

    def atom_tokens(self, x):
        return list(x)


class NaturalMonoid(Monoid):
    """(N, +, 0); prefixes of n are 0..n."""

    identity = 0
    spec = "nat"

    def product(self, x, y):
        return x + y

    def prefixes(self, m):
        return set(range(m + 1))

    def is_prefix(self, p, m):
        return 0 <= p <= m

    def completions(self, p, m):
        return [m - p] if p <= m else []

    def parse_literal(self, text):
        t = text.strip()
        if t == "eps":
            return 0
        if not t.isdigit():
            raise LiteralError(f"bad natural literal {text!r}")
        return int(t)

    def render(self, x):
        return str(x)

    def atom_tokens(self, x):
        return [str(x)] if x else []


class NaturalInfMonoid(Monoid):
    """(N ∪ {∞}, +, 0).

    Pre-rational, but ∞ has infinitely many prefixes, so evaluation at ∞
    only fails with :class:`NonTerminating` once the budget runs out.
    """

    identity = 0
    spec = "natinf"

    def product(self, x, y):
        if x is INF or y is INF:
            return INF
        return x + y

    def prefixes(self, m):
        if m is INF:
            raise NonTerminating("∞ has infinitely many prefixes in N ∪ {∞}")
        return set(range(m + 1))

    def is_prefix(self, p, m):
        if m is INF:
            return True
        return p is not INF and p <= m

    def completions(self, p, m):
        if m is INF:
            raise NonTerminating("∞ has infinitely many factorizations in N ∪ {∞}")
        return [m - p] if self.is_prefix(p, m) else []

    def parse_literal(self, text):
        t = text.strip()
        if t == "inf":
            return INF
        return NaturalMonoid.parse_literal(self, t)

    def render(self, x):
        return "inf" if x is INF else str(x)

    def atom_tokens(self, x):
        if x is INF:
            return ["inf"]
        return [str(x)] if x else []


@dataclass(frozen=True)
class PrefixDfa:
    """Complete DFA over label indices recognizing label words whose product is ``target``.

    ``elements[i]`` is the prefix stored in state ``i``; ``sink`` is the
    extra rejecting state.  ``accepting`` is None when the target is not
    reachable from the labels.
    """

    labels: tuple
    elements: tuple
    target: Any
    initial: int
    accepting: Optional[int]
    sink: int
    delta: tuple  # delta[state][label index] -> state

    @property
    def states(self) -> range:
        return range(len(self.elements) + 1)

    def run(self, word: Iterable[int]) -> int:
        state = self.initial
        for letter in word:
            state = self.delta[state][letter]
        return state

    def accepts(self, word: Iterable[int]) -> bool:
        return self.accepting is not None and self.run(word) == self.accepting


def preimage_dfa(monoid: Monoid, labels: Sequence, m, budget: int = DEFAULT_BUDGET) -> PrefixDfa:
    """Build the DFA over ``labels`` storing the current product while it stays a prefix of ``m``."""
    labels = tuple(labels)
    index = {monoid.identity: 0}
    elements = [monoid.identity]
    rows: list[list[Optional[int]]] = []
    todo = 0
    while todo < len(elements):
        current = elements[todo]
        row: list[Optional[int]] = []
        for label in labels:
            nxt = monoid.product(current, label)
            if nxt in index:
                row.append(index[nxt])
            elif monoid.is_prefix(nxt, m):
                if len(elements) >= budget:
                    raise NonTerminating(
                        f"more than {budget} prefixes of {monoid.render(m)} reachable from the labels"
                    )
                index[nxt] = len(elements)
                elements.append(nxt)
                row.append(index[nxt])
            else:
                row.append(None)
        rows.append(row)
        todo += 1
    sink = len(elements)
    delta = tuple(tuple(sink if s is None else s for s in row) for row in rows)
    delta += (tuple(sink for _ in labels),)
    return PrefixDfa(
        labels=labels,
        elements=tuple(elements),
        target=m,
        initial=0,
        accepting=index.get(m),
        sink=sink,
        delta=delta,
    )


def monoid_from_spec(spec: str) -> Monoid:
    """Build a monoid from ``free:<gens>``, ``nat``, ``natinf``, ``fim:<gens>``,
    ``twoway:<letters>`` or ``twa:<arity>:<labels>``."""
    from . import munn

    spec = spec.strip()
    if spec == "nat":
        return NaturalMonoid()
    if spec == "natinf":
        return NaturalInfMonoid()
    kind, _, rest = spec.partition(":")
    gens = [g.strip() for g in split_top_level(rest) if g.strip()]
    if kind == "free":
        return FreeMonoid(gens)
    if kind == "fim":
        return munn.FreeInverseMonoid(gens)
    if kind == "twoway":
        return munn.FreeInverseMonoid(munn.two_way_alphabet(gens))
    if kind == "twa":
        arity, _, labels = rest.partition(":")
        if not arity.strip().isdigit():
            raise ValueError(f"bad arity in monoid spec {spec!r}")
        names = [g.strip() for g in labels.split(",") if g.strip()]
        return munn.FreeInverseMonoid(munn.tree_alphabet(int(arity), names))
    raise ValueError(f"unknown monoid spec {spec!r}")


__all__ = [
    "DEFAULT_BUDGET",
    "FreeMonoid",
    "Infinity",
    "Monoid",
    "NaturalInfMonoid",
    "NaturalMonoid",
    "NonTerminating",
    "PrefixDfa",
    "monoid_from_spec",
    "preimage_dfa",
]
