import itertools
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prerational import munn
from prerational.munn import IDENTITY, FreeInverseMonoid, from_word, inverse, product
from prerational.semiring import LiteralError

LR = FreeInverseMonoid(["l", "r"])
letters = st.sampled_from([("a", False), ("a", True), ("b", False), ("b", True)])
elements = st.lists(letters, max_size=7).map(from_word)

EXAMPLE_TREES = ["l", "~r", "~l r ~l r", "l ~l r l ~l r l"]


def w(text):
    return munn.parse_word(text)


@settings(max_examples=150, deadline=None)
@given(elements, elements, elements)
def test_inverse_monoid_laws(x, y, z):
    assert product(product(x, y), z) == product(x, product(y, z))
    assert product(product(x, inverse(x)), x) == x
    assert inverse(inverse(x)) == x
    assert inverse(product(x, y)) == product(inverse(y), inverse(x))
    e, f = product(x, inverse(x)), product(y, inverse(y))
    assert product(e, f) == product(f, e)
    assert product(x, IDENTITY) == x == product(IDENTITY, x)


@settings(max_examples=150, deadline=None)
@given(st.lists(letters, max_size=8), st.lists(letters, max_size=8))
def test_from_word_is_a_morphism(u, v):
    assert from_word(u + v) == product(from_word(u), from_word(v))


@settings(max_examples=150, deadline=None)
@given(elements)
def test_walk_reads_the_tree(x):
    assert from_word(munn.walk(x)) == x


def test_reduce_examples():
    assert munn.reduce(w("a ~a")) == ()
    assert munn.reduce(w("l ~l r")) == (("r", False),)
    assert munn.reduce(w("a b ~a")) == tuple(w("a b ~a"))


def test_from_word_examples():
    x = from_word(w("a ~a"))
    assert x.nodes == {(), (("a", False),)} and x.final == ()
    assert x.is_idempotent
    assert from_word([]) == IDENTITY


def test_example_tree_node_counts():
    sizes = [len(LR.parse_literal(t).nodes) for t in EXAMPLE_TREES]
    assert sizes == [2, 2, 5, 6]


def test_comb_tree_is_a_product():
    u = from_word(w("l ~l r"))
    assert product(product(u, u), from_word(w("l"))) == LR.parse_literal(EXAMPLE_TREES[3])


def test_inverse_examples():
    assert inverse(from_word(w("a"))) == from_word(w("~a"))
    assert inverse(IDENTITY) == IDENTITY


def test_prefixes_of_a_letter():
    a = (("a", False),)
    expected = {
        munn.MunnTree(frozenset({()}), ()),
        munn.MunnTree(frozenset({(), a}), ()),
        munn.MunnTree(frozenset({(), a}), a),
    }
    assert munn.prefixes(from_word(w("a"))) == expected
    assert munn.prefixes(IDENTITY) == {IDENTITY}


def _short_elements(n):
    alphabet = [("l", False), ("l", True), ("r", False), ("r", True)]
    return {from_word(u) for k in range(n + 1) for u in itertools.product(alphabet, repeat=k)}


@pytest.mark.parametrize("text", EXAMPLE_TREES[:3] + ["l ~l", "r ~r ~l"])
def test_prefixes_and_completions_brute_force(text):
    m = LR.parse_literal(text)
    pre = munn.prefixes(m)
    for p in pre:
        comps = munn.completions(p, m)
        assert comps
        assert all(product(p, s) == m for s in comps)
    found = {}
    small = _short_elements(4)
    for p in small:
        for s in small:
            if product(p, s) == m:
                found.setdefault(p, set()).add(s)
    for p, ss in found.items():
        assert p in pre
        assert ss <= set(munn.completions(p, m))


def test_is_prefix_is_node_inclusion():
    m = LR.parse_literal("~l r ~l r")
    for p in munn.prefixes(m):
        assert munn.is_prefix(p, m)
    assert not munn.is_prefix(from_word(w("l")), m)


def test_encode_word_abac():
    x = munn.encode_word("abac")
    assert len(x.nodes) == 7
    assert x.final == tuple(w("B a b a c E"))
    assert munn.encode_word("") == from_word(w("B E"))


TREE_WORD = (
    "<T,a> <0,b> _ ~_ ~<0,b> <1,c> <0,d> _ ~_ ~<0,d> "
    "<1,d> _ ~_ ~<1,d> ~<1,c> ~<T,a>"
)


def test_encode_binary_tree():
    t = munn.parse_tree("a(b,c(d,d))")
    assert munn.tree_walk(t, 2) == w(TREE_WORD)
    x = munn.encode_tree(t, 2)
    assert x == from_word(w(TREE_WORD))
    assert x.is_idempotent and len(x.nodes) == 9


def test_encode_single_leaf():
    assert munn.encode_tree(munn.RankedTree("a"), 1) == from_word(w("<T,a> _ ~_ ~<T,a>"))


def test_arity_error():
    with pytest.raises(munn.ArityError):
        munn.encode_tree(munn.parse_tree("a(b,b,b)"), 2)


@pytest.mark.parametrize("bad", ["a(", "a(b", "(b)", "a)b"])
def test_parse_tree_errors(bad):
    with pytest.raises(LiteralError):
        munn.parse_tree(bad)


def test_parse_word_checks_generators():
    with pytest.raises(LiteralError):
        LR.parse_literal("l x")
    with pytest.raises(LiteralError):
        LR.parse_atom("l r")
    assert LR.parse_literal("eps") == IDENTITY


def test_render_round_trip():
    for text in EXAMPLE_TREES:
        x = LR.parse_literal(text)
        assert LR.parse_literal(LR.render(x)) == x


def _dot_counts(dot):
    nodes = re.findall(r"^\s*(n\d+) \[", dot, re.M)
    edges = re.findall(r"^\s*n\d+ -> n\d+", dot, re.M)
    return len(nodes), len(edges)


def test_dot_structure():
    for text, n in zip(EXAMPLE_TREES, [2, 2, 5, 6]):
        dot = munn.to_dot(LR.parse_literal(text), LR)
        assert _dot_counts(dot) == (n, n - 1)
        assert dot.count("doublecircle") == 1
        assert "init -> n0 [arrowhead=none]" in dot
    assert _dot_counts(munn.to_dot(IDENTITY)) == (1, 0)
    dot = munn.to_dot(from_word(w("a")))
    assert _dot_counts(dot) == (2, 1) and 'label="a"' in dot


def test_dot_edges_follow_positive_letters():
    dot = munn.to_dot(from_word(w("~a")))
    assert "n1 -> n0" in dot


def test_display_names():
    assert munn.display_name("B") == "⊢"
    assert munn.display_name("<T,a>") == "(⊤,a)"
    assert munn.display_name("<1,c>") == "(1,c)"
    assert munn.display_name("_") == "⊥"
