"""Weighted automata and expressions over pre-rational monoids."""

from .automaton import Transition, WeightedAutomaton, ambiguity, evaluate, lift_product, run_dfa
from .expression import DIVERGED, evaluate_oracle, mark_unambiguous, parse, render
from .kleene import to_automaton, to_expression
from .monoid import NonTerminating, monoid_from_spec, preimage_dfa
from .semiring import INF, NEG_INF, semiring_from_spec

__version__ = "0.1.0"

__all__ = [
    "DIVERGED",
    "INF",
    "NEG_INF",
    "NonTerminating",
    "Transition",
    "WeightedAutomaton",
    "ambiguity",
    "evaluate",
    "evaluate_oracle",
    "lift_product",
    "mark_unambiguous",
    "monoid_from_spec",
    "parse",
    "preimage_dfa",
    "render",
    "run_dfa",
    "semiring_from_spec",
    "to_automaton",
    "to_expression",
]
