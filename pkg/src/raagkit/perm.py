"""Permutation groups given by generators, closed up on demand.

Permutations are tuples p with p[i] the image of i.  Products act on the
right: mul(p, q) applies p first, then q, so evaluating a word letter by
letter is a homomorphism.
"""

from collections import deque

from .config import BudgetExceeded, DEFAULT


def identity(n):
    return tuple(range(n))


def mul(p, q):
    return tuple(q[i] for i in p)


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def power(p, k):
    if k < 0:
        p, k = inverse(p), -k
    out = identity(len(p))
    while k:
        if k & 1:
            out = mul(out, p)
        p = mul(p, p)
        k >>= 1
    return out


def conj(p, x):
    """x^-1 p x in the right-action convention, i.e. p conjugated by x."""
    return mul(mul(inverse(x), p), x)


def cycle(n, *points):
    out = list(range(n))
    for a, b in zip(points, points[1:] + points[:1]):
        out[a] = b
    return tuple(out)


def direct(p, q):
    n = len(p)
    return tuple(p) + tuple(n + j for j in q)


def from_cycles(n, cycles):
    out = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            out[a] = b
    return tuple(out)


class FiniteGroup:
    """Closure of a set of permutations of {0..degree-1}."""

    def __init__(self, gens, degree=None, cap=None):
        gens = [tuple(g) for g in gens]
        if degree is None:
            degree = len(gens[0]) if gens else 0
        self.degree = degree
        self.gens = [g for g in gens if g != identity(degree)]
        self.cap = cap or DEFAULT.group_order
        self._elements = None

    @property
    def identity(self):
        return identity(self.degree)

    def elements(self):
        if self._elements is None:
            e = self.identity
            seen = {e}
            queue = deque([e])
            while queue:
                x = queue.popleft()
                for g in self.gens:
                    y = mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > self.cap:
                            raise BudgetExceeded("finite group order", len(seen))
                        queue.append(y)
            self._elements = frozenset(seen)
        return self._elements

    def order(self):
        return len(self.elements())

    def __contains__(self, x):
        return tuple(x) in self.elements()

    def __len__(self):
        return self.order()

    def subgroup(self, gens):
        return FiniteGroup(gens, self.degree, self.cap)

    def conjugacy_class(self, x):
        """Orbit of x under conjugation by the group (generators suffice)."""
        seen = {x}
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g in self.gens:
                z = conj(y, g)
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
        return seen

    def centralizer(self, x):
        return frozenset(y for y in self.elements() if mul(x, y) == mul(y, x))

    def is_abelian(self):
        return all(mul(a, b) == mul(b, a) for a in self.gens for b in self.gens)

    def is_normal(self, sub):
        sub = set(sub)
        return all(conj(s, g) in sub for s in sub for g in self.gens)

    def transversal(self, sub=None):
        """Right coset representatives of sub (a set of elements, default trivial).

        Returns a dict from coset key to (representative element, parent key,
        generator index) describing a BFS tree from the trivial coset.
        """
        sub = frozenset(sub) if sub is not None else frozenset([self.identity])
        key = (lambda q: q) if len(sub) == 1 else (lambda q: min(mul(s, q) for s in sub))
        root = key(self.identity)
        tree = {root: (self.identity, None, None)}
        queue = deque([root])
        while queue:
            k = queue.popleft()
            q = tree[k][0]
            for i, g in enumerate(self.gens):
                r = mul(q, g)
                kr = key(r)
                if kr not in tree:
                    tree[kr] = (r, k, i)
                    if len(tree) > self.cap:
                        raise BudgetExceeded("coset enumeration", len(tree))
                    queue.append(kr)
        return tree, key


def symmetric_group(n):
    if n < 2:
        return FiniteGroup([], n)
    return FiniteGroup([cycle(n, 0, 1), cycle(n, *range(n))], n)


def small_groups():
    """A few named groups of order at most 24 as permutation groups."""
    return {
        "C2": FiniteGroup([cycle(2, 0, 1)]),
        "C3": FiniteGroup([cycle(3, 0, 1, 2)]),
        "C4": FiniteGroup([cycle(4, 0, 1, 2, 3)]),
        "C2xC2": FiniteGroup([from_cycles(4, [(0, 1)]), from_cycles(4, [(2, 3)])]),
        "C5": FiniteGroup([cycle(5, 0, 1, 2, 3, 4)]),
        "C6": FiniteGroup([from_cycles(5, [(0, 1), (2, 3, 4)])]),
        "S3": symmetric_group(3),
        "D4": FiniteGroup([cycle(4, 0, 1, 2, 3), from_cycles(4, [(0, 2)])]),
        "Q8": FiniteGroup([
            from_cycles(8, [(0, 1, 4, 5), (2, 7, 6, 3)]),
            from_cycles(8, [(0, 2, 4, 6), (1, 3, 5, 7)])]),
        "A4": FiniteGroup([from_cycles(4, [(0, 1, 2)]), from_cycles(4, [(0, 1), (2, 3)])]),
        "D6": FiniteGroup([cycle(6, 0, 1, 2, 3, 4, 5), from_cycles(6, [(1, 5), (2, 4)])]),
        "S4": symmetric_group(4),
    }
