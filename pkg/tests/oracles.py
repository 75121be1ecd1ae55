"""Brute-force reference implementations used by the tests.

Nothing here calls the package's reduction, conjugacy or centralizer code;
words are plain lists of (vertex, sign) pairs and every decision is made by
exhaustive search over small balls.
"""

import itertools
import random


# -- plain words ------------------------------------------------------------

def parse(text):
    out = []
    for tok in text.split():
        name, _, exp = tok.partition("^")
        out.append((name, -1 if exp == "-1" else 1))
    return out


def fmt(w):
    return " ".join(v + ("^-1" if s < 0 else "") for v, s in w)


def inv(w):
    return [(v, -s) for v, s in reversed(w)]


def commute(graph, u, v):
    return u == v or graph.adjacent(u, v)


def _pattern_from(graph, w, i):
    v, s = w[i]
    for j in range(i + 1, len(w)):
        u, t = w[j]
        if u == v:
            return j if t == -s else None
        if not graph.adjacent(u, v):
            return None
    return None


def find_pattern(graph, w, order="left", rng=None):
    """Index pair (i, j) with w[i] = v^e, w[j] = v^-e and everything between commuting with v."""
    if order == "left":
        for i in range(len(w)):
            j = _pattern_from(graph, w, i)
            if j is not None:
                return i, j
        return None
    if order == "right":
        for i in range(len(w) - 1, -1, -1):
            j = _pattern_from(graph, w, i)
            if j is not None:
                return i, j
        return None
    hits = [(i, j) for i in range(len(w)) for j in [_pattern_from(graph, w, i)] if j is not None]
    return rng.choice(hits) if hits else None


def is_reduced(graph, w):
    return find_pattern(graph, w) is None


def delete_patterns(graph, w, order="left", seed=0):
    w = list(w)
    rng = random.Random(seed)
    while True:
        hit = find_pattern(graph, w, order, rng)
        if hit is None:
            return w
        i, j = hit
        del w[j]
        del w[i]


def heap_reduce(graph, w):
    """Cancellation on a heap of pieces: each new letter drops onto the pile
    and annihilates the topmost equal-vertex piece of opposite sign if no
    non-commuting piece lies above it."""
    pile = []
    for v, s in w:
        k = len(pile) - 1
        hit = None
        while k >= 0:
            u, t = pile[k]
            if u == v:
                if t == -s:
                    hit = k
                break
            if not graph.adjacent(u, v):
                break
            k -= 1
        if hit is None:
            pile.append((v, s))
        else:
            del pile[hit]
    return pile


def foata(graph, w):
    """Foata normal form of a trace: tuple of sorted steps of pairwise commuting letters."""
    rank = []
    for i, (v, s) in enumerate(w):
        r = 0
        for j in range(i):
            u = w[j][0]
            if not commute(graph, u, v) or u == v:
                r = max(r, rank[j] + 1)
        rank.append(r)
    steps = {}
    for (v, s), r in zip(w, rank):
        steps.setdefault(r, []).append((graph.index[v], s < 0, v, s))
    return tuple(tuple(sorted(steps[r])) for r in sorted(steps))


def reduction_strategies(graph):
    """Ten ways to reduce a plain word."""
    out = {
        "left": lambda w: delete_patterns(graph, w, "left"),
        "right": lambda w: delete_patterns(graph, w, "right"),
        "heap": lambda w: heap_reduce(graph, w),
        "inverse": lambda w: inv(delete_patterns(graph, inv(w), "left")),
        "halves": lambda w: delete_patterns(
            graph, delete_patterns(graph, w[:len(w) // 2]) + delete_patterns(graph, w[len(w) // 2:]), "right"),
        "reversed_heap": lambda w: inv(heap_reduce(graph, inv(w))),
    }
    for seed in range(4):
        out[f"random{seed}"] = (lambda s: lambda w: delete_patterns(graph, w, "random", s))(seed)
    return out


def lex_canonical(graph, w):
    """Least word in the commutation class of a reduced word.

    Works on the dependence order: any rearrangement starts with a minimal
    element, so repeatedly taking the least available minimal letter gives
    the lexicographically least linearization.
    """
    n = len(w)
    preds = [0] * n
    succs = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if not commute(graph, w[i][0], w[j][0]) or w[i][0] == w[j][0]:
                preds[j] += 1
                succs[i].append(j)
    key = lambda i: (graph.index[w[i][0]], w[i][1] < 0)
    ready = [i for i in range(n) if not preds[i]]
    out = []
    while ready:
        i = min(ready, key=key)
        ready.remove(i)
        out.append(w[i])
        for j in succs[i]:
            preds[j] -= 1
            if not preds[j]:
                ready.append(j)
    return out


def swap_closure_min(graph, w):
    """Least word among all commutation rearrangements, by exhaustive swaps (short words only)."""
    key = lambda x: tuple((graph.index[v], s < 0) for v, s in x)
    start = tuple(w)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for i in range(len(x) - 1):
            a, b = x[i][0], x[i + 1][0]
            if a != b and graph.adjacent(a, b):
                y = x[:i] + (x[i + 1], x[i]) + x[i + 2:]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return list(min(seen, key=key))


def random_word(rng, graph, length):
    return [(rng.choice(graph.vertices), rng.choice((1, -1))) for _ in range(length)]


# -- balls ------------------------------------------------------------------

def ball(graph, radius, allowed=None, Word=None):
    """Elements of length ≤ radius (as package Words, for hashing) by breadth-first growth.

    Growth uses only concatenation followed by the package's equality, so
    distinct elements are found exactly once.
    """
    verts = [v for v in graph.vertices if allowed is None or v in allowed]
    one = Word.identity(graph)
    gens = [Word.gen(graph, v, s) for v in verts for s in (1, -1)]
    layers = [[one]]
    seen = {one}
    for _ in range(radius):
        nxt = []
        for w in layers[-1]:
            for g in gens:
                u = w * g
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        layers.append(nxt)
    return [w for layer in layers for w in layer]


class ConjugatorSearch:
    """Is there c with |c| ≤ 2r and c g c^-1 = f?  Meet in the middle: c = c1 c2."""

    def __init__(self, graph, Word, radius=4, allowed=None):
        self.graph = graph
        self.Word = Word
        self.half = ball(graph, radius, allowed, Word)

    def find(self, g, f):
        left = {}
        for c2 in self.half:
            left.setdefault(c2 * g * ~c2, c2)
        for c1 in self.half:
            h = ~c1 * f * c1
            if h in left:
                return c1 * left[h]
        return None


def double_coset_search(A_ball, B_ball, x, y):
    """(a, b) with a x b = y from the given balls, or None."""
    right = {}
    for b in B_ball:
        right.setdefault(x * b, b)
    for a in A_ball:
        t = ~a * y
        if t in right:
            return a, right[t]
    return None


# -- small groups -----------------------------------------------------------

def all_graphs(n):
    """Every labelled simplicial graph on the first n of a, b, c, d."""
    from raagkit.graph import Graph
    names = list("abcd"[:n])
    pairs = list(itertools.combinations(names, 2))
    out = []
    for bits in range(1 << len(pairs)):
        out.append(Graph(names, [p for k, p in enumerate(pairs) if bits >> k & 1]))
    return out


def perm_mul(p, q):
    return tuple(q[i] for i in p)


def perm_inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def closure(gens, degree):
    e = tuple(range(degree))
    seen = {e}
    todo = [e]
    while todo:
        x = todo.pop()
        for g in gens:
            y = perm_mul(x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


# -- HNN extensions ----------------------------------------------------------

def hnn_elements(P, max_syllables):
    """Every element x0 s^e1 x1 ... with |ei| = 1 and at most max_syllables syllables.

    Built by multiplying on the right by s^±1 and base elements, so no
    normal-form code is relied on beyond equality of products.
    """
    Q = sorted(P.base.elements())
    base = [P.elem(q) for q in Q]
    layers = [set(base)]
    for _ in range(max_syllables):
        nxt = set()
        for g in layers[-1]:
            for e in (1, -1):
                gs = g * P.stable(e)
                for q in base:
                    nxt.add(gs * q)
        layers.append(nxt)
    out = set()
    for layer in layers:
        out |= layer
    return out


class HnnConjugacyOracle:
    """c g c^-1 = f with c of at most three syllables, as c = c1 c2, |c1| ≤ 2, |c2| ≤ 1."""

    def __init__(self, P):
        self.P = P
        self.short = list(hnn_elements(P, 1))
        self.long = list(hnn_elements(P, 2))
        self._index = {}

    def forward(self, g):
        return {c2 * g * ~c2 for c2 in self.short}

    def backward(self, f):
        return {~c1 * f * c1 for c1 in self.long}

    def classes(self, universe):
        """For each f, the set of g in universe with some conjugator reaching f."""
        index = {}
        for g in universe:
            for v in self.forward(g):
                index.setdefault(v, set()).add(g)
        out = {}
        for f in universe:
            hit = set()
            for v in self.backward(f):
                hit |= index.get(v, set())
            out[f] = hit
        return out


# -- free groups and the 4-cycle ------------------------------------------------

def free_reduce(w):
    out = []
    for v, s in w:
        if out and out[-1] == (v, -s):
            out.pop()
        else:
            out.append((v, s))
    return out


def free_cyclic(w):
    """(u, core) with w = u core u^-1 freely and core cyclically reduced."""
    w = free_reduce(w)
    k = 0
    while 2 * k + 1 < len(w) and w[k] == (w[-1 - k][0], -w[-1 - k][1]):
        k += 1
    return w[:k], w[k:len(w) - k]


def free_root(core):
    """Shortest r with core = r^m."""
    n = len(core)
    for p in range(1, n + 1):
        if n % p == 0 and core[:p] * (n // p) == core:
            return core[:p]
    return core


def free_conjugator(x, y):
    """Some c with c x c^-1 = y in the free group, or None."""
    ux, cx = free_cyclic(x)
    uy, cy = free_cyclic(y)
    if len(cx) != len(cy):
        return None
    for k in range(max(len(cx), 1)):
        if cx[k:] + cx[:k] == cy:
            # cy = cx[:k]^-1 cx cx[:k]
            return free_reduce(uy + inv(cx[:k]) + inv(ux))
    return None


def c4_bb_conjugate(x, y, pair1=("a", "c"), pair2=("b", "d")):
    """Exact conjugacy in the kernel of the exponent-sum map on F(a,c) x F(b,d).

    Returns True/False.  Each factor's conjugators form c0 <root>, or
    everything when that factor of x is trivial; the question is then a
    linear Diophantine equation in the exponent sums.
    """
    import math
    total = 0
    steps = []
    for pair in (pair1, pair2):
        xi = free_reduce([l for l in x if l[0] in pair])
        yi = free_reduce([l for l in y if l[0] in pair])
        c = free_conjugator(xi, yi)
        if c is None:
            return False
        if not xi:
            steps.append(1)
            continue
        total += sum(s for _, s in c)
        u, core = free_cyclic(xi)
        r = free_root(core)
        steps.append(sum(s for _, s in r))
    g = math.gcd(*steps)
    return total % g == 0 if g else total == 0


def ab_sum(w):
    return sum(s for _, s in w)
