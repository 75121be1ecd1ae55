import pytest
from hypothesis import given, strategies as st

from raagkit.graph import Graph, GraphError, cycle_graph, load_graph, path_graph

from strategies import graphs, vsets


def test_load_commuting_pair():
    g = load_graph('{"vertices":["a","b"],"edges":[["a","b"]]}')
    assert g.vertices == ("a", "b")
    assert g.adjacent("a", "b") and g.adjacent("b", "a")


def test_load_free_pair():
    g = load_graph('{"vertices":["x","y"],"edges":[]}')
    assert not g.adjacent("x", "y")


@pytest.mark.parametrize("text, needle", [
    ('{"vertices":["a"],"edges":[["a","a"]]}', "loop edge"),
    ('{"vertices":["a","a"],"edges":[]}', "duplicate vertex"),
    ('{"vertices":["a"],"edges":[["a","b"]]}', "undeclared endpoint"),
    ('{"vertices":["1a"],"edges":[]}', "bad identifier"),
    ('{"vertices":["a"], "edges": [["a"]]}', "edge 0"),
    ('{"vertices": ', "line 1"),
])
def test_load_errors(text, needle):
    with pytest.raises(GraphError, match=needle):
        load_graph(text)


def test_load_is_whitespace_insensitive():
    g = load_graph(' {\n "vertices" : [ "a" , "b" ] ,\n "edges" : [ [ "a" , "b" ] ] }\n')
    assert g == path_graph("ab")


def test_round_trip(c4):
    assert load_graph(c4.to_json()) == c4


def test_empty_graph():
    g = load_graph('{"vertices":[],"edges":[]}')
    assert len(g) == 0 and g.is_connected()
    assert g.star_set(set()) == frozenset()


def test_stars(path3):
    assert path3.star("b") == {"a", "b", "c"}
    assert path3.star("a") == {"a", "b"}
    assert path3.star_set({"a", "c"}) == {"b"}
    assert path3.star_set(set()) == {"a", "b", "c"}


def test_star_unknown_vertex(path3):
    with pytest.raises(GraphError):
        path3.star("q")


def test_connectivity(path3, c4):
    assert c4.is_connected()
    assert not Graph(["x", "y"]).is_connected()
    assert not path3.is_connected({"a", "c"})
    assert path3.is_connected(set())
    assert cycle_graph("abcde").is_connected({"a", "b", "c"})


@given(st.data())
def test_star_duality(data):
    g = data.draw(graphs(max_size=6))
    S, T = data.draw(vsets(g)), data.draw(vsets(g))
    assert (T <= g.star_set(S)) == (S <= g.star_set(T))


@given(st.data())
def test_star_set_antitone(data):
    g = data.draw(graphs(max_size=6))
    S, T = data.draw(vsets(g)), data.draw(vsets(g))
    assert g.star_set(S | T) <= g.star_set(S)


@given(graphs(max_size=6))
def test_connectivity_matches_search(g):
    # independent flood fill over names
    if not g.vertices:
        return
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        u = stack.pop()
        for v in g.vertices:
            if v not in seen and g.adjacent(u, v):
                seen.add(v)
                stack.append(v)
    assert g.is_connected() == (len(seen) == len(g))
