"""Translations between weighted expressions and weighted automata.

Expression to automaton: mark stars, index leaves, build the position
automaton of the resulting (unambiguous) Kleene expression, then move
indices into states so each indexed atom becomes a labelled transition and
each indexed weight an identity-labelled weighted transition.

Automaton to expression: state elimination on the run DFA gives an
unambiguous Kleene expression over transitions, in which every transition
letter is substituted by ``label · weight``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable

from .automaton import START, RunDfa, Transition, WeightedAutomaton, _Node, eliminate, run_dfa
from .expression import (
    Atom, Expr, Indexed, Product, Star, Sum, Weight, index, leaves, mark_unambiguous,
)
from .monoid import FreeMonoid, Monoid
from .semiring import BOOLEAN, Semiring


@dataclass
class PositionAutomaton:
    """Glushkov automaton of an indexed expression; state ``i`` means "just read leaf i"."""

    leaves: list
    first: set
    last: set
    nullable: bool
    follow: dict = field(default_factory=dict)

    def transitions(self):
        yield from ((None, i) for i in sorted(self.first))
        for p in range(len(self.leaves)):
            yield from ((p, i) for i in sorted(self.follow.get(p, ())))

    def accepts(self, word) -> bool:
        state = None
        for i in word:
            allowed = self.first if state is None else self.follow.get(state, set())
            if i not in allowed:
                return False
            state = i
        return self.nullable if state is None else state in self.last


def position_automaton(indexed: Expr) -> PositionAutomaton:
    follow: dict[int, set] = {}

    def walk(n: Expr):
        if isinstance(n, Indexed):
            return False, {n.index}, {n.index}
        if isinstance(n, Star):
            _, first, last = walk(n.body)
            for i in last:
                follow.setdefault(i, set()).update(first)
            return True, first, last
        parts = [walk(c) for c in n.items]
        if isinstance(n, Sum):
            return (
                any(p[0] for p in parts),
                set().union(*(p[1] for p in parts)),
                set().union(*(p[2] for p in parts)),
            )
        nullable, first, last = parts[0]
        for n2, f2, l2 in parts[1:]:
            for i in last:
                follow.setdefault(i, set()).update(f2)
            first = first | f2 if nullable else first
            last = l2 | last if n2 else l2
            nullable = nullable and n2
        return nullable, first, last

    nullable, first, last = walk(indexed)
    return PositionAutomaton([leaf.leaf for leaf in leaves(indexed)], first, last, nullable, follow)


def to_automaton(node: Expr, semiring: Semiring, monoid: Monoid) -> WeightedAutomaton:
    """Weighted automaton with the same series, and the same ambiguity, as ``node``.

    States are the reachable part of (position states) × (leaf indices),
    renumbered 0.. in breadth-first order; state 0 is the only initial one.
    """
    marked = index(mark_unambiguous(node, semiring.one))
    pa = position_automaton(marked)
    out_of: dict = {}
    for p, i in pa.transitions():
        out_of.setdefault(p, []).append(i)

    start = (None, 0)
    ids = {start: 0}
    order = [start]
    ts: list[Transition] = []
    todo = 0
    while todo < len(order):
        p, j = order[todo]
        todo += 1
        for i in out_of.get(p, ()):
            nxt = (i, i)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            leaf = pa.leaves[i]
            if isinstance(leaf, Atom):
                ts.append(Transition(ids[(p, j)], leaf.element, semiring.one, ids[nxt]))
            else:
                ts.append(Transition(ids[(p, j)], monoid.identity, leaf.value, ids[nxt]))
    final = [ids[s] for s in order if (s[0] is None and pa.nullable) or (s[0] is not None and s[0] in pa.last)]
    return WeightedAutomaton(semiring, monoid, range(len(order)), [0], final, ts)


class _ExprAlgebra:
    """Kleene expressions as a semiring of syntax, with sound unit/zero simplifications."""

    def __init__(self, zero: Expr, one: Expr):
        self.zero = zero
        self.one = one

    def add(self, x, y):
        if x == self.zero:
            return y
        if y == self.zero:
            return x
        items = (x.items if isinstance(x, Sum) else (x,)) + (y.items if isinstance(y, Sum) else (y,))
        return Sum(items)

    def mul(self, x, y):
        if x == self.zero or y == self.zero:
            return self.zero
        if x == self.one:
            return y
        if y == self.one:
            return x
        items = (x.items if isinstance(x, Product) else (x,)) + (y.items if isinstance(y, Product) else (y,))
        return Product(items)

    def star(self, x):
        return self.one if x == self.zero else Star(x)


def letter_name(i: int) -> str:
    return f"t{i}"


def run_expression(automaton: WeightedAutomaton) -> tuple[Expr, FreeMonoid]:
    """Unambiguous Kleene expression (Boolean weights) over transition letters ``t0, t1, ...``
    denoting the accepting runs."""
    runs: RunDfa = run_dfa(automaton)
    letters = FreeMonoid([letter_name(i) for i in runs.alphabet])
    alg = _ExprAlgebra(Weight(False), Weight(True))
    order = {START: -1}
    for i, q in enumerate(automaton.states):
        order[q] = i
    source, sink = _Node("source"), _Node("accept")
    order[source], order[sink] = -3, -2

    graph: dict = {(source, START): alg.one}
    seen = {START}
    todo = [START]
    while todo:
        q = todo.pop()
        if runs.is_accepting(q):
            graph[(q, sink)] = alg.one
        for i, nxt in runs.successors(q):
            letter = Atom((letter_name(i),))
            edge = (q, nxt)
            graph[edge] = alg.add(graph[edge], letter) if edge in graph else letter
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return eliminate(graph, order.__getitem__, alg, source, sink), letters


def substitute(kleene: Expr, label: Callable[[int], Any], weight: Callable[[int], Any],
               semiring: Semiring, monoid: Monoid) -> Expr:
    """Replace letter ``t_i`` by ``label(i) · weight(i)`` and Booleans by 0/1."""

    def leaf(n: Expr) -> Expr:
        if isinstance(n, Weight):
            return Weight(semiring.one if n.value else semiring.zero)
        i = int(n.element[0][1:])
        m, k = label(i), weight(i)
        if m == monoid.identity:
            return Weight(k)
        if semiring.eq(k, semiring.one):
            return Atom(m)
        return Product((Atom(m), Weight(k)))

    def go(n: Expr) -> Expr:
        if isinstance(n, Sum):
            return Sum(tuple(go(c) for c in n.items))
        if isinstance(n, Product):
            items = [go(c) for c in n.items]
            flat = []
            for c in items:
                flat.extend(c.items if isinstance(c, Product) else (c,))
            units = [c for c in flat if isinstance(c, Weight) and semiring.eq(c.value, semiring.one)]
            if len(units) < len(flat):
                flat = [c for c in flat if c not in units]
            else:
                flat = flat[:1]
            return flat[0] if len(flat) == 1 else Product(tuple(flat))
        if isinstance(n, Star):
            return Star(go(n.body))
        return leaf(n)

    return go(kleene)


def to_expression(automaton: WeightedAutomaton) -> Expr:
    """Weighted expression with the same series as ``automaton``.

    Decompositions of the result correspond one to one with accepting runs,
    except for an automaton without accepting runs, which yields ``[0]``.
    """
    A = automaton
    kleene, _ = run_expression(A)
    ts = A.transitions
    return substitute(kleene, lambda i: ts[i].label, lambda i: ts[i].weight, A.semiring, A.monoid)


def characteristic_oracle(node: Expr, word, semiring: Semiring = BOOLEAN) -> int:
    """1 if ``word`` is in the classical language of ``node`` with weights erased, else 0.

    Weight leaves read as the empty word when nonzero and as the empty set
    when zero; atoms are free-monoid words.  Uses Python's ``re``.
    """
    alphabet: dict[str, str] = {}

    def code(g: str) -> str:
        if g not in alphabet:
            alphabet[g] = chr(0x100 + len(alphabet))
        return alphabet[g]

    def rx(n: Expr) -> str:
        if isinstance(n, Indexed):
            return rx(n.leaf)
        if isinstance(n, Weight):
            return "(?!)" if semiring.is_zero(n.value) else ""
        if isinstance(n, Atom):
            return "".join(re.escape(code(g)) for g in n.element)
        if isinstance(n, Sum):
            return "(?:" + "|".join(rx(c) for c in n.items) + ")"
        if isinstance(n, Product):
            return "".join(f"(?:{rx(c)})" for c in n.items)
        return f"(?:{rx(n.body)})*"

    pattern = rx(node)
    text = "".join(code(g) for g in word)
    return 1 if re.fullmatch(pattern, text) else 0
