"""Special and parabolic subgroups: membership, intersections, double cosets."""

from dataclasses import dataclass
from functools import lru_cache

from .config import BudgetExceeded
from .word import Word


def as_mask(graph, S):
    if isinstance(S, int):
        return S
    return graph.mask(S)


@dataclass(frozen=True)
class Parabolic:
    """The subgroup conj * <base> * conj^-1; base is a vertex bitmask."""
    conj: Word
    base: int

    @property
    def graph(self):
        return self.conj.graph

    def names(self):
        return self.graph.names(self.base)

    def generators(self):
        g = self.graph
        return [Word.gen(g, g.vertices[i]).conj(self.conj)
                for i in range(len(g)) if self.base >> i & 1]

    def __contains__(self, g):
        return parabolic_member(g, self)

    def conjugated(self, c):
        return Parabolic(c * self.conj, self.base)

    def __le__(self, other):
        return all(parabolic_member(x, other) for x in self.generators())

    def same(self, other):
        return self <= other and other <= self

    def __str__(self):
        inner = "{" + ",".join(v for v in self.graph.vertices if v in self.names()) + "}"
        if not self.conj:
            return f"<{inner}>"
        return f"({self.conj}) <{inner}> ({~self.conj})"


def special(graph, S):
    return Parabolic(Word.identity(graph), as_mask(graph, S))


def intersect_special(S, T):
    return frozenset(S) & frozenset(T)


def parabolic_member(g, p):
    k = (~p.conj) * g * p.conj
    return k.in_special(p.base)


def intersect_parabolics(p, q, depth=64):
    """p ∩ q as a Parabolic.

    Conjugating by the conjugator of q reduces to g<S>g^-1 ∩ <T>, handled by
    peeling first letters of g that lie in T, last letters of g that
    normalize <S>, and otherwise dropping one vertex of S at a time and
    keeping the largest of the resulting candidates.
    """
    graph = p.graph
    g = (~q.conj) * p.conj
    h, P = _inter(graph, g.letters, p.base, q.base, depth)
    return Parabolic(q.conj * Word(graph, h, canonical=True), P)


def _inter(graph, g, S, T, depth):
    return _inter_cached(graph, g, S, T, depth)


@lru_cache(maxsize=200_000)
def _inter_cached(graph, g, S, T, depth):
    if depth <= 0:
        raise BudgetExceeded("parabolic intersection recursion")
    if not S:
        return (), 0
    if not g:
        return (), S & T
    w = Word(graph, g, canonical=True)
    for a in sorted(w.first_codes()):
        if T >> (a >> 1) & 1:
            f = Word(graph, (a ^ 1,)) * w
            h, P = _inter(graph, f.letters, S, T, depth - 1)
            return (Word(graph, (a,)) * Word(graph, h, canonical=True)).letters, P
    norm = S | graph.star_set_mask(S)
    for b in sorted(w.last_codes()):
        if norm >> (b >> 1) & 1:
            f = w * Word(graph, (b ^ 1,))
            return _inter(graph, f.letters, S, T, depth - 1)
    cands = []
    m = S
    while m:
        s = m & -m
        m ^= s
        h, P = _inter(graph, g, S & ~s, T, depth - 1)
        cands.append(Parabolic(Word(graph, h, canonical=True), P))
    for c in sorted(cands, key=lambda c: -bin(c.base).count("1")):
        if all(d <= c for d in cands):
            return c.conj.letters, c.base
    raise RuntimeError("no maximal candidate among parabolic intersections")


@dataclass(frozen=True)
class DCReduction:
    alpha: Word
    gamma: Word
    meet: int


def dc_reduction(A, B, x):
    graph = x.graph
    A, B = as_mask(graph, A), as_mask(graph, B)
    gamma = (x.retract_mask(B) * ~x).retract_mask(A)
    alpha = gamma * x * (~x).retract_mask(B)
    return DCReduction(alpha, gamma, A & B)


def dc_member(A, x, B, y, solver=None):
    """Decide y ∈ <A> x <B>; on success also return (a, b) with y = a x b."""
    graph = x.graph
    A, B = as_mask(graph, A), as_mask(graph, B)
    if x == y:
        one = Word.identity(graph)
        return True, (one, one)
    solver = solver or _default_solver(graph)
    rx = dc_reduction(A, B, x)
    ry = dc_reduction(A, B, y)
    c = solver.conj_sub(A & B, rx.alpha, ry.alpha)
    if c is None:
        return False, None
    # alpha = ax x bx, beta = ay y by, beta = c alpha c^-1
    ax, bx = rx.gamma, (~x).retract_mask(B)
    ay, by = ry.gamma, (~y).retract_mask(B)
    a = ~ay * c * ax
    b = bx * ~c * ~by
    assert a * x * b == y
    return True, (a, b)


def conj_special_intersection(A, x, B, solver=None):
    """<A> ∩ x<B>x^-1 computed as gamma^-1 C_{A∩B}(alpha) gamma."""
    graph = x.graph
    A, B = as_mask(graph, A), as_mask(graph, B)
    solver = solver or _default_solver(graph)
    r = dc_reduction(A, B, x)
    C = solver.centr_sub(A & B, r.alpha)
    p = C.as_parabolic()
    return Parabolic(~r.gamma * p.conj, p.base)


def meet_parabolics(p, q, solver=None, how="centralizer"):
    """p ∩ q, either through a centralizer in a special subgroup or by recursion."""
    if how == "recursion":
        return intersect_parabolics(p, q)
    x = (~p.conj) * q.conj
    r = conj_special_intersection(p.base, x, q.base, solver)
    return r.conjugated(p.conj)


def fold_cosets(cosets, solver=None, how="centralizer"):
    """Intersect cosets u_i <H_i> v_i; returns None or (W, z) with the meet = W z."""
    cosets = list(cosets)
    if not cosets:
        raise ValueError("need at least one coset")
    u, H, v = cosets[0]
    graph = u.graph
    W = Parabolic(u, as_mask(graph, H))
    z = u * v
    for u, H, v in cosets[1:]:
        W2 = Parabolic(u, as_mask(graph, H))
        z2 = u * v
        h1, h2 = W.conj, W2.conj
        y = ~h1 * z * ~z2 * h2
        x = ~h1 * h2
        ok, ab = dc_member(W.base, x, W2.base, y, solver)
        if not ok:
            return None
        a, _ = ab
        z = (~a).conj(h1) * z
        W = meet_parabolics(W, W2, solver, how)
    return W, z


def _default_solver(graph):
    from .conjugacy import Solver
    return Solver(graph)
