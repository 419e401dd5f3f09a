import itertools
import random

from grid import AB, WORDS, grid
from prerational import automaton as au
from prerational import expression as ex
from prerational import kleene, regex
from prerational.automaton import WeightedAutomaton
from prerational.expression import Atom, Indexed, Product, Star, Sum, Weight
from prerational.monoid import FreeMonoid
from prerational.munn import FreeInverseMonoid
from prerational.semiring import BOOLEAN, COUNTING, TROPICAL

A1 = FreeMonoid(["a"])


def test_position_automaton_sets():
    W = ex.index(ex.parse("(a.b)*.a", COUNTING, AB))
    pa = kleene.position_automaton(W)
    assert pa.first == {0, 2} and pa.last == {2} and not pa.nullable
    assert pa.follow == {0: {1}, 1: {0, 2}}
    assert pa.accepts([0, 1, 2]) and not pa.accepts([0, 2])


def test_weight_compiles_to_identity_transition():
    A = kleene.to_automaton(ex.parse("[3]", COUNTING, AB), COUNTING, AB)
    assert [(t.label, t.weight) for t in A.transitions] == [((), 3)]
    assert au.evaluate(A, ()) == 3
    assert A.initial == {0}


def test_compiled_ambiguity_of_the_star_example():
    W = ex.parse("([2].a+[3].a.a)*", COUNTING, A1)
    A = kleene.to_automaton(W, COUNTING, A1)
    assert au.ambiguity(A, ("a",) * 3) == 3
    assert au.evaluate(A, ("a",) * 3) == 20


def test_comb_automaton_matches_oracle():
    fim = FreeInverseMonoid(["l", "r"])
    W = ex.parse("(l.~l.r.[1])*.l", TROPICAL, fim)
    A = kleene.to_automaton(W, TROPICAL, fim)
    for text in ["l", "~r", "~l r ~l r", "l ~l r l ~l r l", "l ~l r l"]:
        m = fim.parse_literal(text)
        assert au.evaluate(A, m) == ex.evaluate_oracle(W, m, TROPICAL, fim)
    assert au.evaluate(A, fim.parse_literal("l ~l r l ~l r l")) == 2


def test_decompile_simple_automata():
    single = WeightedAutomaton(COUNTING, AB, ["q0", "qf"], ["q0"], ["qf"], [("q0", ("a",), 3, "qf")])
    assert ex.render(kleene.to_expression(single), COUNTING, AB) == "a.[3]"
    no_final = WeightedAutomaton(COUNTING, AB, ["q0"], ["q0"], [], [("q0", ("a",), 3, "q0")])
    assert kleene.to_expression(no_final) == Weight(0)


def test_run_expression_is_unambiguous():
    rng = random.Random(2)
    for _ in range(40):
        states = [0, 1, 2]
        ts = [(rng.choice(states), ("a",), 1, rng.choice(states)) for _ in range(4)]
        A = WeightedAutomaton(COUNTING, AB, states, rng.sample(states, 2), rng.sample(states, 2), ts)
        E, letters = kleene.run_expression(A)
        runs = au.run_dfa(A)
        counted = ex.with_weights(E, lambda b: 1 if b else 0)
        for n in range(5):
            for word in itertools.product(range(len(ts)), repeat=n):
                names = tuple(kleene.letter_name(i) for i in word)
                assert ex.ambiguity(counted, names, letters) == (1 if runs.accepts(word) else 0)


def test_marked_indexed_expression_is_unambiguous():
    for W in grid(COUNTING, count=80, seed=4):
        marked = ex.index(ex.mark_unambiguous(W, 1))
        n = len(ex.leaves(marked))
        names = [f"x{i}" for i in range(n)]
        letters = FreeMonoid(names)
        kleene_expr = ex.map_leaves(marked, lambda leaf: Atom((names[leaf.index],)))
        A = kleene.to_automaton(kleene_expr, COUNTING, letters)
        for k in range(4):
            for word in itertools.product(names, repeat=k):
                assert au.ambiguity(A, word) <= 1


def _transition_free(node):
    """True if the node can be traversed without reading a nonempty atom."""
    if isinstance(node, Indexed):
        return isinstance(node.leaf, Weight) or node.leaf.element == ()
    if isinstance(node, Sum):
        return any(_transition_free(c) for c in node.items)
    if isinstance(node, Product):
        return all(_transition_free(c) for c in node.items)
    return True


def _has_silent_star(node):
    if isinstance(node, Star):
        return _transition_free(node.body) or _has_silent_star(node.body)
    if isinstance(node, (Sum, Product)):
        return any(_has_silent_star(c) for c in node.items)
    return False


def _language(node):
    if isinstance(node, Atom):
        return regex.Sym(node.element[0])
    if isinstance(node, Sum):
        return regex.union(*(_language(c) for c in node.items))
    if isinstance(node, Product):
        return regex.concat(*(_language(c) for c in node.items))
    return regex.star(_language(node.body))


def test_indexed_word_sum_equals_evaluation():
    """Sum over indexed words w with label m of weight(w)·1_E(w), by finite enumeration."""
    K = COUNTING
    checked = 0
    for W in grid(K, count=150, seed=5):
        E = ex.index(ex.mark_unambiguous(W, K.one))
        if _has_silent_star(E):
            continue
        leaves = [leaf.leaf for leaf in ex.leaves(E)]
        names = tuple(f"x{i}" for i in range(len(leaves)))
        kleene_expr = ex.map_leaves(E, lambda leaf: Atom((names[leaf.index],)))
        for m in WORDS[:15]:
            total = K.zero
            # depth-first over indexed words; derivatives prune dead prefixes
            todo = [((), (), K.one, _language(kleene_expr))]
            while todo:
                word, consumed, weight, rest = todo.pop()
                if consumed == m and kleene.characteristic_oracle(kleene_expr, word):
                    total = K.add(total, weight)
                for i, leaf in enumerate(leaves):
                    label = () if isinstance(leaf, Weight) else leaf.element
                    nxt = consumed + label
                    d = regex.derivative(rest, names[i])
                    if nxt != m[: len(nxt)] or d == regex.EMPTY:
                        continue
                    w = K.mul(weight, leaf.value) if isinstance(leaf, Weight) else weight
                    todo.append((word + (names[i],), nxt, w, d))
            assert total == ex.evaluate(W, m, K, AB), (ex.render(W, K, AB), m)
            checked += 1
    assert checked > 500


def test_characteristic_oracle_examples():
    assert kleene.characteristic_oracle(ex.parse("a+b", BOOLEAN, AB), ("a",)) == 1
    assert kleene.characteristic_oracle(ex.parse("a.b", BOOLEAN, AB), ("b", "a")) == 0
    assert kleene.characteristic_oracle(ex.parse("(a.b)*", BOOLEAN, AB), tuple("abab")) == 1


def test_boolean_evaluation_matches_regex_membership():
    for W in grid(COUNTING, count=120, seed=6):
        B = ex.with_weights(W, lambda k: k != 0)
        for w in WORDS:
            got = ex.evaluate(B, w, BOOLEAN, AB)
            assert int(got) == kleene.characteristic_oracle(W, w, COUNTING), (ex.render(W, COUNTING, AB), w)


def test_compile_is_deterministic():
    for W in grid(TROPICAL, count=30):
        A1_, A2_ = (kleene.to_automaton(W, TROPICAL, AB) for _ in range(2))
        assert au.dumps(A1_) == au.dumps(A2_)
        assert ex.render(kleene.to_expression(A1_), TROPICAL, AB) == ex.render(kleene.to_expression(A2_), TROPICAL, AB)


def test_decompiled_text_reparses_to_same_series():
    for K in (COUNTING, TROPICAL):
        for W in grid(K, count=60, seed=9):
            X = kleene.to_expression(kleene.to_automaton(W, K, AB))
            V = ex.parse(ex.render(X, K, AB), K, AB)
            for w in WORDS[:15]:
                assert K.eq(ex.evaluate(V, w, K, AB), ex.evaluate(W, w, K, AB))


def test_automaton_to_expression_preserves_ambiguity():
    rng = random.Random(11)
    for _ in range(40):
        states = [0, 1, 2]
        labels = [("a",), ("b",), ()]
        ts = [(rng.choice(states), rng.choice(labels), rng.randint(0, 2), rng.choice(states)) for _ in range(4)]
        A = WeightedAutomaton(COUNTING, AB, states, rng.sample(states, 1), rng.sample(states, 2), ts)
        X = kleene.to_expression(A)
        no_runs = kleene.run_expression(A)[0] == Weight(False)
        for w in WORDS[:15]:
            assert ex.evaluate(X, w, COUNTING, AB) == au.evaluate(A, w)
            if no_runs:
                # [0] is the only output here; its one decomposition is at eps
                assert X == Weight(0) and ex.ambiguity(X, w, AB) == (1 if w == () else 0)
            else:
                assert ex.ambiguity(X, w, AB) == au.ambiguity(A, w)


def test_substitute_identity_label_becomes_weight():
    E = Star(Atom(("t0",)))
    got = kleene.substitute(E, lambda i: (), lambda i: 2, COUNTING, AB)
    assert got == Star(Weight(2))
    got = kleene.substitute(Product((Atom(("t0",)), Atom(("t1",)))), lambda i: ("a",), lambda i: 1, COUNTING, AB)
    assert got == Product((Atom(("a",)), Atom(("a",))))
