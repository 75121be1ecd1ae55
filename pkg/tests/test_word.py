import random

import pytest
from hypothesis import given, strategies as st

from raagkit.graph import Graph, random_graph
from raagkit.word import (Word, cyclic_reduce, first_letters, inv, is_cyclically_reduced,
                          is_graphically_reduced, last_letters, length, mul, nth_root,
                          nth_root_search, reduce, representatives, retract, support, word_eq)

import oracles
from strategies import graph_and_words, graphs, vsets, words


def W(g, s):
    return Word.parse(g, s)


def test_reduce_examples(path3):
    assert str(reduce(path3, "a b a^-1")) == "b"
    assert str(reduce(path3, "a c a^-1")) == "a c a^-1"
    assert str(reduce(path3, "b a b^-1 c b")) == "a b c"


def test_reduce_example_by_oracle(path3):
    raw = oracles.parse("b a b^-1 c b")
    red = oracles.delete_patterns(path3, raw)
    assert oracles.fmt(oracles.lex_canonical(path3, red)) == "a b c"
    assert oracles.fmt(oracles.swap_closure_min(path3, red)) == "a b c"


def test_arith_examples(edge, f2, path3):
    assert word_eq(W(edge, "a b"), W(edge, "b a"))
    assert length(W(f2, "x y x^-1")) == 3
    assert support(reduce(path3, "b a b^-1")) == {"a"}
    assert not mul(W(f2, "x y"), inv(W(f2, "x y")))


def test_parse_errors(f2):
    with pytest.raises(ValueError, match="unknown vertex"):
        W(f2, "x z")
    with pytest.raises(ValueError, match="exponent"):
        W(f2, "x^2")
    assert not W(f2, "")


def test_mixed_graphs(f2, edge):
    with pytest.raises(ValueError):
        W(f2, "x") * W(edge, "a")


def test_first_letters(edge, f2, path3):
    assert first_letters(W(edge, "a b")) == {("a", 1), ("b", 1)}
    assert first_letters(W(f2, "x y")) == {("x", 1)}
    # c and a do not commute on the path, so only what can move to the
    # front of c a b counts; b commutes with both and can, a cannot.
    assert first_letters(W(path3, "c a b")) == {("b", 1), ("c", 1)}
    assert last_letters(W(f2, "x y^-1")) == {("y", -1)}


def test_first_letters_by_enumeration(path3):
    g = W(path3, "c a b")
    firsts = {oracles.parse(r)[0] for r in _reps(path3, g)}
    assert firsts == {("b", 1), ("c", 1)}


def _reps(graph, g):
    start = tuple(oracles.parse(str(g)))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for i in range(len(x) - 1):
            if x[i][0] != x[i + 1][0] and graph.adjacent(x[i][0], x[i + 1][0]):
                y = x[:i] + (x[i + 1], x[i]) + x[i + 2:]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return [oracles.fmt(x) for x in seen]


def test_retract_examples(path3):
    g = W(path3, "a c b")
    assert not retract(set(), g)
    assert str(retract({"a", "b"}, g)) == "a b"


def test_retract_composition_sampled(path3):
    rng = random.Random(5)
    for _ in range(100):
        g = Word(path3, [rng.randrange(6) for _ in range(rng.randrange(12))])
        assert retract({"a"}, retract({"b"}, g)) == retract(set(), g)


def test_cyclic_reduce_examples(f2, path3):
    cf = cyclic_reduce(W(f2, "x y x^-1"))
    assert str(cf.conj) == "x" and str(cf.core) == "y"
    cf = cyclic_reduce(W(path3, "c a b a^-1"))
    assert not cf.conj
    assert cf.core == W(path3, "c b")
    assert len(cf.core) == 2


def test_cyclic_reduce_fixed_point(c4):
    g = W(c4, "a b c d")
    cf = cyclic_reduce(g)
    assert not cf.conj and cf.core == g


def test_root_examples(f2):
    g = W(f2, "x y x^-1")
    assert nth_root(g, 1) == g
    assert str(nth_root(W(f2, "x y x y"), 2)) == "x y"
    assert nth_root(W(f2, "x y"), 2) is None
    with pytest.raises(ValueError):
        nth_root(g, 0)


def test_root_by_brute_force(f2):
    # no element of length 1 squares to x y
    assert all(s * s != W(f2, "x y") for s in oracles.ball(f2, 1, Word=Word))


def test_representatives(path3):
    g = W(path3, "c a b")
    ours = {str(Word(path3, r, canonical=True)) for r in representatives(g)}
    assert ours == set(_reps(path3, g))


# properties ---------------------------------------------------------------

@given(graph_and_words(1, max_len=12))
def test_reduce_is_reduced_and_idempotent(gw):
    g, w = gw
    assert is_graphically_reduced(g, w.letters)
    assert oracles.is_reduced(g, oracles.parse(str(w)))
    assert Word(g, w.letters) == w
    assert not w * ~w


@given(st.data())
def test_reduce_matches_oracles(data):
    g = data.draw(graphs(max_size=5))
    raw = data.draw(st.lists(st.tuples(st.sampled_from(g.vertices), st.sampled_from((1, -1))), max_size=10))
    w = Word.parse(g, oracles.fmt(raw))
    ref = oracles.heap_reduce(g, raw)
    assert len(w) == len(ref)
    assert oracles.foata(g, oracles.parse(str(w))) == oracles.foata(g, ref)
    assert oracles.parse(str(w)) == oracles.lex_canonical(g, ref)
    assert oracles.swap_closure_min(g, ref) == oracles.lex_canonical(g, ref)


@given(st.data())
def test_retract_laws(data):
    g = data.draw(graphs(max_size=5))
    w = data.draw(words(g, 10))
    S, T = data.draw(vsets(g)), data.draw(vsets(g))
    assert retract(S, retract(S, w)) == retract(S, w)
    assert retract(S, retract(T, w)) == retract(S & T, w)
    u = data.draw(words(g, 6))
    assert retract(S, u * w) == retract(S, u) * retract(S, w)


@given(graph_and_words(1, max_len=10))
def test_first_last_letters(gw):
    g, w = gw
    fl = first_letters(w)
    for (u, _), (v, _) in [(p, q) for p in fl for q in fl if p != q]:
        assert g.adjacent(u, v)
    assert last_letters(w) == {(v, -s) for v, s in first_letters(~w)}
    if len(w) <= 7:
        firsts = {oracles.parse(r)[0] for r in _reps(g, w)} if w else set()
        assert fl == firsts


@given(graph_and_words(2, max_len=8))
def test_cyclic_reduce_invariants(gw):
    g, w, c = gw
    cf = cyclic_reduce(w)
    assert cf.element() == w
    assert len(w) == len(cf.core) + 2 * len(cf.conj)
    assert is_cyclically_reduced(cf.core)
    if not is_cyclically_reduced(w):
        assert len(w * w) < 2 * len(w)
    # conjugate cores have the same support
    assert cyclic_reduce(w.conj(c)).core.support() == cf.core.support()


@given(graph_and_words(1, max_len=6), st.integers(1, 3))
def test_roots_two_routes(gw, n):
    g, x = gw
    y = x ** n
    assert nth_root(y, n) == x
    assert nth_root_search(y, n) == x


@given(graph_and_words(1, max_len=8), st.integers(2, 3))
def test_root_absent_agrees(gw, n):
    g, y = gw
    a, b = nth_root(y, n), nth_root_search(y, n)
    assert a == b
    if a is not None:
        assert a ** n == y


def test_random_graph_helper():
    g = random_graph(random.Random(1), 5)
    assert len(g) == 5 and isinstance(g, Graph)
