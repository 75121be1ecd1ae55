"""Special HNN-extensions <Q, s || s z s^-1 = z for z in Hbar> of a finite group Q.

Base elements are permutations (see module perm).  Elements are kept in a
normal form: a Britton-reduced product x0 s^e1 x1 ... s^en xn in which each
x_i with i < n is the smallest element of its coset x_i Hbar.  Since s
commutes with Hbar, sliding Hbar-elements to the right is free, so this form
is unique and equality of elements is equality of forms.
"""

from dataclasses import dataclass

from . import perm
from .perm import FiniteGroup, mul, inverse


class HnnGroup:
    def __init__(self, base, hbar):
        if not isinstance(base, FiniteGroup):
            base = FiniteGroup(base)
        self.base = base
        hbar = frozenset(tuple(h) for h in hbar) | {base.identity}
        for a in hbar:
            if a not in base:
                raise ValueError("associated subgroup is not inside the base")
            for b in hbar:
                if mul(a, b) not in hbar:
                    raise ValueError("associated subset is not closed under products")
        self.hbar = hbar
        self._coset = {}
        self._cyc = {}

    @property
    def identity(self):
        return HnnElement(self, self.base.identity, ())

    def stable(self, e=1):
        one = self.base.identity
        return HnnElement(self, one, ((e, one),))

    def elem(self, q):
        return HnnElement(self, tuple(q), ())

    def coset_rep(self, x):
        """(r, h) with x = r h, r the least element of x Hbar."""
        if x not in self._coset:
            best = min((mul(x, h), h) for h in self.hbar)
            self._coset[x] = (best[0], inverse(best[1]))
        return self._coset[x]

    def __eq__(self, other):
        return (isinstance(other, HnnGroup) and self.hbar == other.hbar
                and self.base.elements() == other.base.elements())

    def __hash__(self):
        return hash(self.hbar)


@dataclass(frozen=True)
class HnnElement:
    group: HnnGroup
    x0: tuple
    syllables: tuple

    def __len__(self):
        return len(self.syllables)

    def pattern(self):
        return tuple(e for e, _ in self.syllables)

    def is_base(self):
        return not self.syllables

    def __mul__(self, other):
        raw = [self.x0] + list(self.syllables)
        if self.syllables:
            e, x = raw[-1]
            raw[-1] = (e, mul(x, other.x0))
        else:
            raw[0] = mul(raw[0], other.x0)
        return britton_reduce(self.group, raw + list(other.syllables))

    def __invert__(self):
        xs = [self.x0] + [x for _, x in self.syllables]
        es = [e for e, _ in self.syllables]
        raw = [inverse(xs[-1])]
        for i in range(len(es) - 1, -1, -1):
            raw.append((-es[i], inverse(xs[i])))
        return britton_reduce(self.group, raw)

    def __pow__(self, n):
        if n < 0:
            return (~self) ** (-n)
        out = self.group.identity
        for _ in range(n):
            out = out * self
        return out

    def conj(self, c):
        return c * self * ~c

    def __eq__(self, other):
        return (isinstance(other, HnnElement) and self.x0 == other.x0
                and self.syllables == other.syllables)

    def __hash__(self):
        return hash((self.x0, self.syllables))

    def __str__(self):
        parts = [_fmt(self.x0)]
        for e, x in self.syllables:
            parts.append(f"s^{e} {_fmt(x)}")
        return " . ".join(parts)

    __repr__ = __str__


def _fmt(q):
    return "[" + " ".join(map(str, q)) + "]"


def britton_reduce(P, raw):
    """Normal form of x0 s^e1 x1 ... from raw = [x0, (e1, x1), (e2, x2), ...].

    Whenever the base entry between two stable letters lies in Hbar, it is
    pushed across and the exponents merge (cancelling when they sum to 0).
    """
    raw = list(raw)
    xs = [tuple(raw[0])]
    es = []
    for e, x in raw[1:]:
        x = tuple(x)
        if not e:
            xs[-1] = mul(xs[-1], x)
            continue
        if es and xs[-1] in P.hbar:
            h = xs.pop()
            a = es.pop()
            xs[-1] = mul(xs[-1], h)
            if a + e:
                es.append(a + e)
                xs.append(x)
            else:
                xs[-1] = mul(xs[-1], x)
        else:
            es.append(e)
            xs.append(x)
    # normalise coset representatives left to right
    out = []
    carry = None
    for i, x in enumerate(xs):
        if carry is not None:
            x = mul(carry, x)
        if i < len(es):
            r, h = P.coset_rep(x)
            out.append(r)
            carry = h
        else:
            out.append(x)
    return HnnElement(P, out[0], tuple(zip(es, out[1:])))


def hnn_cyclic_reduce(P, g):
    """(c, core) with g = c core c^-1 and core = s^e1 x1 ... s^en xn cyclically reduced.

    For n = 0 the core is a base element.
    """
    if g not in P._cyc:
        P._cyc[g] = _cyclic_reduce(P, g)
    return P._cyc[g]


def _cyclic_reduce(P, g):
    c = P.identity
    while True:
        if not g.syllables:
            return c, g
        x0 = P.elem(g.x0)
        g = ~x0 * g * x0
        c = c * x0
        if len(g.syllables) == 1 or g.syllables[-1][1] not in P.hbar:
            return c, g
        e, last = g.syllables[-1]
        m = HnnElement(P, P.base.identity, ((e, last),))
        g = m * g * ~m
        c = c * ~m


def _rotation_prefix(P, core, k):
    return HnnElement(P, P.base.identity, core.syllables[:k])


def base_conjugator(Q, a, b):
    """Some y in Q with y a y^-1 = b, or None."""
    for y in Q.elements():
        if mul(mul(y, a), inverse(y)) == b:
            return y
    return None


def hnn_conjugate(P, g, f):
    """Some c with c g c^-1 = f, or None; exact for a finite base."""
    c1, g1 = hnn_cyclic_reduce(P, g)
    c2, f1 = hnn_cyclic_reduce(P, f)
    if len(g1) != len(f1):
        return None
    if not g1.syllables:
        y = base_conjugator(P.base, g1.x0, f1.x0)
        if y is None:
            return None
        c = c2 * P.elem(y) * ~c1
        assert c * g * ~c == f
        return c
    pat = g1.pattern()
    for k in range(len(f1)):
        p = _rotation_prefix(P, f1, k)
        fk = ~p * f1 * p
        if fk.pattern() != pat:
            continue
        for h in sorted(P.hbar):
            hh = P.elem(h)
            if hh * g1 * ~hh == fk:
                c = c2 * p * hh * ~c1
                assert c * g * ~c == f
                return c
    return None


@dataclass
class HnnCentralizer:
    element: HnnElement
    generators: list
    kind: str
    assoc_part: list
    omega: list

    def contains_description(self, c, bound=3):
        """Is c in the bounded product set C_Hbar(g) <g>^[-bound, bound] Omega?"""
        P = self.element.group
        g = self.element
        if self.kind == "product":
            s = P.stable()
            for l in range(-bound, bound + 1):
                r = c * s ** (-l)
                if r.is_base() and r.x0 in self.assoc_part:
                    return True
            return False
        for w in [P.identity] + self.omega:
            for l in range(-bound, bound + 1):
                r = c * ~w * g ** (-l)
                if r.is_base() and r.x0 in self.assoc_part:
                    return True
        return False


def hnn_centralizer(P, g):
    """Centralizer of a cyclically reduced g with at least one stable letter."""
    if not g.syllables:
        raise ValueError("centralizer needs at least one stable letter")
    c, core = hnn_cyclic_reduce(P, g)
    if c != P.identity or core != g:
        raise ValueError("element is not cyclically reduced")
    if g.x0 != P.base.identity:
        raise ValueError("cyclically reduced form must start with a stable letter")
    e_last, x_last = g.syllables[-1]
    if x_last in P.hbar:
        ch = sorted(h for h in P.hbar if mul(h, x_last) == mul(x_last, h))
        gens = [P.stable()] + [P.elem(h) for h in ch if h != P.base.identity]
        return HnnCentralizer(g, gens, "product", ch, [])
    ch = sorted(h for h in P.hbar if P.elem(h) * g == g * P.elem(h))
    omega = []
    for i in range(1, len(g)):
        p = _rotation_prefix(P, g, i)
        gp = ~p * g * p
        for h in sorted(P.hbar):
            hh = P.elem(h)
            if hh * gp * ~hh == g:
                omega.append(hh * ~p)
                break
    gens = [P.elem(h) for h in ch if h != P.base.identity] + [g] + omega
    for w in gens:
        assert w * g == g * w
    return HnnCentralizer(g, gens, "triple", ch, omega)


def base_centralizer(P, q):
    """C_Q(q), and whether q is conjugate in Q into Hbar.

    Only the part of the centralizer lying in the base is described here.
    """
    q = tuple(q)
    C = sorted(y for y in P.base.elements() if mul(y, q) == mul(q, y))
    flag = any(mul(mul(y, q), inverse(y)) in P.hbar for y in P.base.elements())
    return C, flag


class ExtendedHom:
    """psi on <A> extended to <A, t> -> HNN(psi(A), psi(H)) with t -> s."""

    def __init__(self, graph, amb, t, psi):
        self.graph = graph
        self.amb = amb
        self.t = t
        self.A = amb & ~(1 << t)
        self.H = self.A & graph.adj[t]
        if psi.J & self.A != self.A:
            raise ValueError("psi must be defined on every vertex of the base")
        self.psi = psi
        Q = psi.image_of(self.A)
        Hbar = psi.image_of(self.H).elements()
        self.P = HnnGroup(Q, Hbar)

    def __call__(self, w):
        if not w.in_special(self.amb):
            raise ValueError("element outside the splitting")
        one = self.psi.identity
        raw = [one]
        for c in w.letters:
            v = c >> 1
            if v == self.t:
                raw.append((-1 if c & 1 else 1, one))
            else:
                q = self.psi.letter(c)
                if len(raw) == 1:
                    raw[0] = mul(raw[0], q)
                else:
                    e, x = raw[-1]
                    raw[-1] = (e, mul(x, q))
        return britton_reduce(self.P, raw)


def extend_hom(graph, amb, t, psi):
    return ExtendedHom(graph, amb, t, psi)


class HnnEndo:
    """Endomorphism of P given on the base by a function and on s by an element."""

    def __init__(self, P, base_map, s_image):
        self.P = P
        self.base_map = base_map
        self.s_image = s_image

    def __call__(self, g):
        P = self.P
        out = P.elem(self.base_map(g.x0))
        for e, x in g.syllables:
            out = out * self.s_image ** e * P.elem(self.base_map(x))
        return out


def hnn_retractions(P, rho):
    """Extensions of a base retraction rho: the first kills s, the second fixes it.

    rho is a dict or function on Q with rho∘rho = rho; the second extension
    needs rho(Hbar) ⊆ Hbar.
    """
    f = rho.__getitem__ if isinstance(rho, dict) else rho
    for q in P.base.elements():
        if f(f(q)) != f(q):
            raise ValueError("base map is not idempotent")
    for a in P.base.gens:
        for b in P.base.gens:
            if f(mul(a, b)) != mul(f(a), f(b)):
                raise ValueError("base map is not a homomorphism")
    r1 = HnnEndo(P, f, P.identity)
    if any(f(h) not in P.hbar for h in P.hbar):
        raise ValueError("base retraction does not preserve the associated subgroup")
    r2 = HnnEndo(P, f, P.stable())
    return r1, r2


@dataclass(frozen=True)
class TowerLevel:
    vertex: str
    base: frozenset
    assoc: frozenset


def build_tower(graph):
    """Levels G_i = HNN(G_{i-1}, v_i) in vertex order, with associated sets."""
    out = []
    for i, v in enumerate(graph.vertices):
        base = frozenset(graph.vertices[:i])
        assoc = frozenset(u for u in base if graph.adjacent(u, v))
        out.append(TowerLevel(v, base, assoc))
    return out


def cyclic_group(n):
    return FiniteGroup([perm.cycle(n, *range(n))] if n > 1 else [], max(n, 1))
