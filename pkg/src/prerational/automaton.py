"""Weighted automata over a pre-rational monoid and their evaluation.

Evaluation at ``m`` intersects the run language with the preimage DFA of
``m`` (synchronizing on transitions), forgets labels, and sums the path
weights of the resulting finite graph by state elimination, which only
needs finite sums, products and star.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, NamedTuple, Optional, Sequence

from .monoid import DEFAULT_BUDGET, Monoid, monoid_from_spec, preimage_dfa
from .semiring import COUNTING, ProductSemiring, Semiring, semiring_from_spec


class Transition(NamedTuple):
    source: Hashable
    label: Any
    weight: Any
    target: Hashable


@dataclass(frozen=True)
class WeightedAutomaton:
    semiring: Semiring
    monoid: Monoid
    states: tuple
    initial: frozenset
    final: frozenset
    transitions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        object.__setattr__(self, "transitions", tuple(Transition(*t) for t in self.transitions))
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state names")
        for q in self.initial | self.final:
            if q not in known:
                raise ValueError(f"unknown state {q!r}")
        for t in self.transitions:
            if t.source not in known or t.target not in known:
                raise ValueError(f"transition {t} references an unknown state")

    def with_weights(self, semiring: Semiring, weights: Sequence) -> "WeightedAutomaton":
        ts = [t._replace(weight=w) for t, w in zip(self.transitions, weights, strict=True)]
        return WeightedAutomaton(semiring, self.monoid, self.states, self.initial, self.final, ts)

    def normalized(self) -> "WeightedAutomaton":
        """Copy without zero-weight transitions; the series is unchanged."""
        ts = [t for t in self.transitions if not self.semiring.is_zero(t.weight)]
        return WeightedAutomaton(self.semiring, self.monoid, self.states, self.initial, self.final, ts)


class _Node:
    """End markers for state elimination graphs."""

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


START = _Node("START")


@dataclass(frozen=True)
class RunDfa:
    """The accepting-run language of an automaton as a DFA over transition indices.

    A fresh ``START`` state stands for "no transition read yet", so letter
    ``t`` leads to ``transitions[t].target`` from START when its source is
    initial, and from its source state otherwise.  Everything else goes to
    the sink (None).
    """

    automaton: WeightedAutomaton

    @property
    def alphabet(self) -> range:
        return range(len(self.automaton.transitions))

    def step(self, state, letter: int):
        t = self.automaton.transitions[letter]
        if state is None:
            return None
        if state is START:
            return t.target if t.source in self.automaton.initial else None
        return t.target if t.source == state else None

    def is_accepting(self, state) -> bool:
        if state is START:
            return bool(self.automaton.initial & self.automaton.final)
        return state is not None and state in self.automaton.final

    def accepts(self, word: Iterable[int]) -> bool:
        state = START
        for letter in word:
            state = self.step(state, letter)
        return self.is_accepting(state)

    def successors(self, state) -> list[tuple[int, Any]]:
        out = []
        for i in self.alphabet:
            nxt = self.step(state, i)
            if nxt is not None:
                out.append((i, nxt))
        return out


def run_dfa(automaton: WeightedAutomaton) -> RunDfa:
    return RunDfa(automaton)


def eliminate(graph: dict, order_key, semiring: Semiring, source, sink):
    """Sum all source-to-sink path weights of ``graph`` ({(u, v): weight}).

    Inner nodes are removed one at a time, cheapest (in-degree × out-degree)
    first, ties broken by ``order_key``.
    """
    succ: dict[Any, set] = {}
    pred: dict[Any, set] = {}
    for u, v in graph:
        succ.setdefault(u, set()).add(v)
        pred.setdefault(v, set()).add(u)
    inner = {n for edge in graph for n in edge} - {source, sink}
    add, mul = semiring.add, semiring.mul
    while inner:
        def cost(n):
            ins = len(pred.get(n, set()) - {n})
            outs = len(succ.get(n, set()) - {n})
            return (ins * outs, order_key(n))

        q = min(inner, key=cost)
        inner.discard(q)
        loop = graph.pop((q, q), None)
        ins = sorted(pred.pop(q, set()) - {q}, key=order_key)
        outs = sorted(succ.pop(q, set()) - {q}, key=order_key)
        loop_star = semiring.star(loop) if loop is not None else None
        for p in ins:
            w_in = graph.pop((p, q))
            succ[p].discard(q)
            if loop_star is not None:
                w_in = mul(w_in, loop_star)
            for r in outs:
                w = mul(w_in, graph[(q, r)])
                if (p, r) in graph:
                    graph[(p, r)] = add(graph[(p, r)], w)
                else:
                    graph[(p, r)] = w
                    succ.setdefault(p, set()).add(r)
                    pred.setdefault(r, set()).add(p)
        for r in outs:
            del graph[(q, r)]
            pred[r].discard(q)
    return graph.get((source, sink), semiring.zero)


def evaluate(automaton: WeightedAutomaton, m, budget: int = DEFAULT_BUDGET):
    """Sum of the weights of accepting runs labelled ``m``.

    Raises :class:`~prerational.monoid.NonTerminating` when the preimage DFA
    of ``m`` exceeds ``budget`` states.
    """
    A = automaton
    K = A.semiring
    ts = A.transitions
    distinct: dict = {}
    for t in ts:
        distinct.setdefault(t.label, len(distinct))
    dfa = preimage_dfa(A.monoid, list(distinct), m, budget=budget)
    if dfa.accepting is None:
        return K.zero
    letter = [distinct[t.label] for t in ts]
    runs = run_dfa(A)
    by_source: dict = {}
    for i, t in enumerate(ts):
        by_source.setdefault(t.source, []).append(i)
    from_start = [i for i, t in enumerate(ts) if t.source in A.initial]

    start = (START, dfa.initial)
    ids = {start: 0}
    order = [start]
    graph: dict = {}
    sink = _Node("accept")
    todo = 0
    while todo < len(order):
        node = order[todo]
        todo += 1
        q, d = node
        if d == dfa.accepting and runs.is_accepting(q):
            graph[(node, sink)] = K.one
        for i in from_start if q is START else by_source.get(q, ()):
            d2 = dfa.delta[d][letter[i]]
            if d2 == dfa.sink:
                continue
            nxt = (ts[i].target, d2)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            edge = (node, nxt)
            graph[edge] = K.add(graph[edge], ts[i].weight) if edge in graph else ts[i].weight
    source = _Node("source")
    graph[(source, start)] = K.one
    rank = {**ids, source: -2, sink: -1}
    return eliminate(graph, rank.__getitem__, K, source, sink)


def counting_copy(automaton: WeightedAutomaton) -> WeightedAutomaton:
    return automaton.with_weights(COUNTING, [1] * len(automaton.transitions))


def ambiguity(automaton: WeightedAutomaton, m, budget: int = DEFAULT_BUDGET):
    """Number of accepting runs labelled ``m`` (possibly ``INF``)."""
    return evaluate(counting_copy(automaton), m, budget=budget)


def lift_product(automaton: WeightedAutomaton) -> WeightedAutomaton:
    """Pair each weight k with 1 in K × N∞; the second coordinate counts runs."""
    K2 = ProductSemiring(automaton.semiring, COUNTING)
    return automaton.with_weights(K2, [(t.weight, 1) for t in automaton.transitions])


@dataclass
class Series:
    """A series backed by an automaton or an expression."""

    fn: Any
    semiring: Semiring
    monoid: Monoid
    cache: dict = field(default_factory=dict)

    def __call__(self, m):
        if m not in self.cache:
            self.cache[m] = self.fn(m)
        return self.cache[m]

    @classmethod
    def of_automaton(cls, automaton: WeightedAutomaton) -> "Series":
        return cls(lambda m: evaluate(automaton, m), automaton.semiring, automaton.monoid)


# JSON / DOT


def _state_json(q):
    if isinstance(q, (str, int)) and not isinstance(q, bool):
        return q
    return str(q)


def to_json(automaton: WeightedAutomaton) -> dict:
    A = automaton
    return {
        "semiring": A.semiring.spec,
        "monoid": A.monoid.spec,
        "states": [_state_json(q) for q in A.states],
        "initial": [_state_json(q) for q in A.states if q in A.initial],
        "final": [_state_json(q) for q in A.states if q in A.final],
        "transitions": [
            {
                "from": _state_json(t.source),
                "label": A.monoid.render(t.label),
                "weight": A.semiring.render(t.weight),
                "to": _state_json(t.target),
            }
            for t in A.transitions
        ],
    }


def dumps(automaton: WeightedAutomaton) -> str:
    return json.dumps(to_json(automaton), indent=2, ensure_ascii=False) + "\n"


def from_json(data: dict, semiring: Optional[Semiring] = None, monoid: Optional[Monoid] = None) -> WeightedAutomaton:
    K = semiring or semiring_from_spec(data["semiring"])
    M = monoid or monoid_from_spec(data["monoid"])
    ts = [
        Transition(t["from"], M.parse_literal(t["label"]), K.parse_literal(str(t["weight"])), t["to"])
        for t in data.get("transitions", [])
    ]
    return WeightedAutomaton(K, M, data["states"], data.get("initial", []), data.get("final", []), ts)


def loads(text: str) -> WeightedAutomaton:
    return from_json(json.loads(text))


def to_dot(automaton: WeightedAutomaton, name: str = "automaton") -> str:
    A = automaton
    ids = {q: f"q{i}" for i, q in enumerate(A.states)}

    def esc(s: str) -> str:
        return s.replace("\\", "\\\\").replace('"', '\\"')

    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for q in A.states:
        shape = "doublecircle" if q in A.final else "circle"
        lines.append(f'  {ids[q]} [label="{esc(str(q))}", shape={shape}];')
    for q in A.states:
        if q in A.initial:
            lines.append(f'  init_{ids[q]} [shape=none, label=""];')
            lines.append(f"  init_{ids[q]} -> {ids[q]};")
    for t in A.transitions:
        label = f"{A.monoid.render(t.label)} | {A.semiring.render(t.weight)}"
        lines.append(f'  {ids[t.source]} -> {ids[t.target]} [label="{esc(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
