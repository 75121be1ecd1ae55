"""Element arithmetic in a right-angled Artin group.

Letters are encoded as ints ``2*i`` (vertex i) and ``2*i+1`` (its inverse), so
integer order is the canonical letter order: vertex order first, then the
positive letter before the negative one.  A :class:`Word` always holds the
canonical graphically reduced form of its element.
"""

from collections import deque
from dataclasses import dataclass

from .config import BudgetExceeded, DEFAULT


def _push(out, c, adj):
    # append letter c to a graphically reduced list, cancelling if possible
    v = c >> 1
    av = adj[v]
    i = len(out) - 1
    while i >= 0:
        d = out[i]
        u = d >> 1
        if u == v:
            if d == c ^ 1:
                del out[i]
                return
            break
        if not av >> u & 1:
            break
        i -= 1
    out.append(c)


def free_reduce(letters, adj):
    out = []
    for c in letters:
        _push(out, c, adj)
    return out


def lex_form(letters, adj):
    """Greedy lexicographic representative of a reduced word."""
    rem = list(letters)
    out = []
    while rem:
        seen = 0
        best = bi = -1
        for i, c in enumerate(rem):
            v = c >> 1
            if not (seen & ~adj[v]) and not seen >> v & 1:
                if best < 0 or c < best:
                    best, bi = c, i
            seen |= 1 << v
        out.append(best)
        del rem[bi]
    return tuple(out)


def _front(letters, adj):
    # indices of letters that can be moved to the front
    seen = 0
    idx = []
    for i, c in enumerate(letters):
        v = c >> 1
        if not (seen & ~adj[v]) and not seen >> v & 1:
            idx.append(i)
        seen |= 1 << v
    return idx


def _back(letters, adj):
    seen = 0
    idx = []
    for i in range(len(letters) - 1, -1, -1):
        v = letters[i] >> 1
        if not (seen & ~adj[v]) and not seen >> v & 1:
            idx.append(i)
        seen |= 1 << v
    return idx


def _inv(letters):
    return [c ^ 1 for c in reversed(letters)]


class Word:
    __slots__ = ("graph", "letters", "_hash")

    def __init__(self, graph, letters=(), canonical=False):
        self.graph = graph
        if canonical:
            self.letters = tuple(letters)
        else:
            self.letters = lex_form(free_reduce(letters, graph.adj), graph.adj)
        self._hash = None

    @classmethod
    def parse(cls, graph, text):
        return cls(graph, parse_letters(graph, text))

    @classmethod
    def identity(cls, graph):
        return cls(graph, (), canonical=True)

    @classmethod
    def gen(cls, graph, v, sign=1):
        i = graph.index[v]
        return cls(graph, (2 * i + (sign < 0),), canonical=True)

    def __str__(self):
        return format_letters(self.graph, self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters and self.graph == other.graph

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def _check(self, other):
        if other.graph is not self.graph and other.graph != self.graph:
            raise ValueError("words over different graphs")

    def __mul__(self, other):
        self._check(other)
        out = list(self.letters)
        adj = self.graph.adj
        for c in other.letters:
            _push(out, c, adj)
        return Word(self.graph, lex_form(out, adj), canonical=True)

    def __invert__(self):
        return Word(self.graph, _inv(self.letters))

    inv = __invert__

    def __pow__(self, n):
        if n < 0:
            return (~self) ** (-n)
        out = Word.identity(self.graph)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self, c):
        """c * self * c^-1"""
        return c * self * ~c

    def support_mask(self):
        m = 0
        for c in self.letters:
            m |= 1 << (c >> 1)
        return m

    def support(self):
        return self.graph.names(self.support_mask())

    def first_letters(self):
        return {_signed(self.graph, self.letters[i]) for i in _front(self.letters, self.graph.adj)}

    def last_letters(self):
        return {_signed(self.graph, self.letters[i]) for i in _back(self.letters, self.graph.adj)}

    def first_codes(self):
        return [self.letters[i] for i in _front(self.letters, self.graph.adj)]

    def last_codes(self):
        return [self.letters[i] for i in _back(self.letters, self.graph.adj)]

    def retract_mask(self, m):
        return Word(self.graph, [c for c in self.letters if m >> (c >> 1) & 1])

    def retract(self, S):
        return self.retract_mask(self.graph.mask(S))

    def in_special(self, m):
        return not self.support_mask() & ~m

    def commutes(self, other):
        return self * other == other * self

    def exponent_sums(self):
        out = [0] * len(self.graph)
        for c in self.letters:
            out[c >> 1] += -1 if c & 1 else 1
        return out


def _signed(graph, c):
    return (graph.vertices[c >> 1], -1 if c & 1 else 1)


def letter_code(graph, v, sign):
    return 2 * graph.index[v] + (sign < 0)


def parse_letters(graph, text):
    out = []
    for pos, tok in enumerate(text.split()):
        name, sep, exp = tok.partition("^")
        if sep and exp not in ("-1", "1"):
            raise ValueError(f"token {pos} ({tok!r}): exponent must be 1 or -1")
        if name not in graph.index:
            raise ValueError(f"token {pos} ({tok!r}): unknown vertex {name!r}")
        out.append(2 * graph.index[name] + (exp == "-1"))
    return out


def format_letters(graph, letters):
    return " ".join(graph.vertices[c >> 1] + ("^-1" if c & 1 else "") for c in letters)


# module-level API ---------------------------------------------------------

def word(graph, w):
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(graph, w)
    return Word(graph, w)


def reduce(graph, w):
    return word(graph, w) if not isinstance(w, Word) else Word(graph, w.letters)


def support(g):
    return g.support()


def length(g):
    return len(g)


def mul(u, v):
    return u * v


def inv(u):
    return ~u


def word_eq(u, v):
    return u == v


def first_letters(g):
    return g.first_letters()


def last_letters(g):
    return g.last_letters()


def retract(S, g):
    return g.retract(S)


def is_graphically_reduced(graph, letters):
    """Direct check: no v U v^-1 with every letter of U commuting with v."""
    adj = graph.adj
    n = len(letters)
    for i in range(n):
        v = letters[i] >> 1
        for j in range(i + 1, n):
            d = letters[j]
            if d >> 1 == v:
                if d == letters[i] ^ 1:
                    return False
                break
            if not adj[v] >> (d >> 1) & 1:
                break
    return True


def representatives(g, cap=None):
    """All reduced words for g, by BFS over swaps of adjacent commuting letters."""
    cap = cap or DEFAULT.nodes
    adj = g.graph.adj
    start = g.letters
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            a, b = w[i] >> 1, w[i + 1] >> 1
            if a != b and adj[a] >> b & 1:
                nw = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                if nw not in seen:
                    seen.add(nw)
                    if len(seen) > cap:
                        raise BudgetExceeded("reduced representatives", len(seen))
                    queue.append(nw)
    return seen


def prefix_splits(g, cap=None):
    """All factorizations g = u*v with |u| + |v| = |g|, as pairs of Words.

    Prefixes of a reduced word correspond to downward closed sets of its
    letter positions, where position j sits above i < j when the two letters
    do not commute; these are enumerated breadth first.
    """
    cap = cap or DEFAULT.nodes
    adj = g.graph.adj
    w = g.letters
    n = len(w)
    below = []
    for j in range(n):
        m = 0
        vj = w[j] >> 1
        for i in range(j):
            vi = w[i] >> 1
            if vi == vj or not adj[vi] >> vj & 1:
                m |= 1 << i
        below.append(m)
    seen = {0}
    queue = deque([0])
    while queue:
        ideal = queue.popleft()
        for j in range(n):
            if not ideal >> j & 1 and below[j] & ~ideal == 0:
                nxt = ideal | (1 << j)
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise BudgetExceeded("prefix enumeration", len(seen))
                    queue.append(nxt)
    out = []
    for ideal in sorted(seen, key=lambda m: (bin(m).count("1"), m)):
        u = [w[i] for i in range(n) if ideal >> i & 1]
        v = [w[i] for i in range(n) if not ideal >> i & 1]
        out.append((Word(g.graph, lex_form(u, adj), canonical=True),
                    Word(g.graph, lex_form(v, adj), canonical=True)))
    return out


@dataclass(frozen=True)
class CyclicForm:
    conj: Word
    core: Word

    def element(self):
        return self.core.conj(self.conj)


def is_cyclically_reduced(g):
    last = set(g.last_codes())
    return not any(c ^ 1 in last for c in g.first_codes())


def cyclic_reduce(g):
    """g = z * core * z^-1 with |g| = |core| + 2|z| and core cyclically reduced."""
    graph = g.graph
    adj = graph.adj
    letters = list(g.letters)
    z = []
    while True:
        front = _front(letters, adj)
        back = _back(letters, adj)
        backs = {letters[i]: i for i in back}
        hit = None
        for i in sorted(front, key=lambda i: letters[i]):
            j = backs.get(letters[i] ^ 1)
            if j is not None:
                hit = (i, j)
                break
        if hit is None:
            break
        i, j = hit
        z.append(letters[i])
        letters = [c for k, c in enumerate(letters) if k != i and k != j]
    return CyclicForm(Word(graph, z), Word(graph, lex_form(letters, adj), canonical=True))


def nth_root(g, n):
    """The unique x with x^n = g, or None.

    The cyclic core of a root is a prefix of the core of g; its letter counts
    are fixed (each vertex occurs 1/n times as often), and a prefix of a
    reduced word is determined by how many occurrences of each vertex it
    takes.  So there is a single candidate, which is then checked.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1 or not g:
        return g
    cf = cyclic_reduce(g)
    core = cf.core.letters
    if len(core) % n:
        return None
    counts = {}
    for c in core:
        counts[c >> 1] = counts.get(c >> 1, 0) + 1
    if any(k % n for k in counts.values()):
        return None
    quota = {v: k // n for v, k in counts.items()}
    taken = []
    for c in core:
        v = c >> 1
        if quota[v]:
            quota[v] -= 1
            taken.append(c)
    x0 = Word(g.graph, taken)
    if x0 ** n != cf.core:
        return None
    return x0.conj(cf.conj)


def nth_root_search(g, n, cap=None):
    """Root by literal period search over every reduced word of the core."""
    if n == 1 or not g:
        return g
    cf = cyclic_reduce(g)
    L = len(cf.core)
    if L % n:
        return None
    k = L // n
    for w in representatives(cf.core, cap):
        if w[:k] * n == w:
            return Word(g.graph, w[:k]).conj(cf.conj)
    return None
