"""Presentation graphs: vertices, stars, full subgraphs."""

import json
import re

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class GraphError(ValueError):
    pass


class Graph:
    """Finite simplicial graph; vertex order is the order given at construction.

    Vertex sets are exchanged as frozensets of names.  Internally vertices are
    numbered 0..n-1 and adjacency is kept as bitmasks, which is what the word
    arithmetic uses.
    """

    def __init__(self, vertices, edges=()):
        vertices = tuple(vertices)
        self.vertices = vertices
        self.index = {}
        for i, v in enumerate(vertices):
            if not isinstance(v, str) or not NAME.match(v):
                raise GraphError(f"vertex {i}: bad identifier {v!r}")
            if v in self.index:
                raise GraphError(f"vertex {i}: duplicate vertex {v!r}")
            self.index[v] = i
        self.adj = [0] * len(vertices)
        pairs = set()
        for k, e in enumerate(edges):
            u, v = tuple(e)
            for w in (u, v):
                if w not in self.index:
                    raise GraphError(f"edge {k}: undeclared endpoint {w!r}")
            if u == v:
                raise GraphError(f"edge {k}: loop edge at {u!r}")
            i, j = self.index[u], self.index[v]
            self.adj[i] |= 1 << j
            self.adj[j] |= 1 << i
            pairs.add((min(i, j), max(i, j)))
        self.edges = tuple((vertices[i], vertices[j]) for i, j in sorted(pairs))
        self.full = (1 << len(vertices)) - 1

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.vertices == other.vertices
                and self.adj == other.adj)

    def __hash__(self):
        return hash((self.vertices, tuple(self.adj)))

    def __repr__(self):
        return f"Graph({list(self.vertices)}, {[list(e) for e in self.edges]})"

    # conversions between names and masks
    def mask(self, S):
        m = 0
        for v in S:
            if v not in self.index:
                raise GraphError(f"unknown vertex {v!r}")
            m |= 1 << self.index[v]
        return m

    def names(self, m):
        return frozenset(v for i, v in enumerate(self.vertices) if m >> i & 1)

    def adjacent(self, u, v):
        return bool(self.adj[self.index[u]] >> self.index[v] & 1)

    # stars
    def star_mask(self, i):
        return self.adj[i] | (1 << i)

    def star_set_mask(self, m):
        out = self.full
        i = 0
        while m:
            if m & 1:
                out &= self.star_mask(i)
            m >>= 1
            i += 1
        return out

    def star(self, v):
        return self.names(self.star_mask(self.mask([v]).bit_length() - 1))

    def star_set(self, S):
        return self.names(self.star_set_mask(self.mask(S)))

    def is_connected(self, S=None):
        m = self.full if S is None else self.mask(S)
        return self.connected_mask(m)

    def connected_mask(self, m):
        if not m:
            return True
        seen = m & -m
        frontier = seen
        while frontier:
            i = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = self.adj[i] & m & ~seen
            seen |= new
            frontier |= new
        return seen == m

    def to_json(self):
        return json.dumps({"vertices": list(self.vertices),
                           "edges": [list(e) for e in self.edges]})


def load_graph(text):
    """Parse the JSON graph format; errors name the offending location."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise GraphError("top level: expected an object")
    vertices = data.get("vertices")
    edges = data.get("edges", [])
    if not isinstance(vertices, list):
        raise GraphError("'vertices': expected an array of strings")
    if not isinstance(edges, list):
        raise GraphError("'edges': expected an array")
    for k, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise GraphError(f"edge {k}: expected a two-element string array")
    return Graph(vertices, edges)


def path_graph(names):
    names = list(names)
    return Graph(names, list(zip(names, names[1:])))


def cycle_graph(names):
    names = list(names)
    return Graph(names, list(zip(names, names[1:] + names[:1])))


def complete_graph(names):
    names = list(names)
    return Graph(names, [(u, v) for i, u in enumerate(names) for v in names[i + 1:]])


def random_graph(rng, n, p=0.5):
    names = list("abcdefgh"[:n]) if n <= 8 else [f"v{i}" for i in range(n)]
    edges = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(names, edges)
