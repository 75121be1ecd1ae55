"""Conjugacy and centralizers, through the tower of special HNN-splittings.

Splitting the ambient special subgroup <amb> over <amb - t> exhibits it as an
HNN-extension with stable letter t whose associated subgroup is generated by
the neighbours of t.  Every recursive call below happens inside the base of
such a splitting, so the ambient rank strictly decreases.
"""

from collections import deque
from dataclasses import dataclass, field

from .config import DEFAULT, BudgetExceeded
from .special import Parabolic, as_mask, dc_member, fold_cosets, intersect_parabolics
from .word import Word, cyclic_reduce, prefix_splits


def _low(m):
    return (m & -m).bit_length() - 1


class Splitting:
    """<amb> = HNN(<A>, t) with A = amb - t and associated subgroup <H>, H = A ∩ lk(t)."""

    def __init__(self, graph, amb, t):
        self.graph = graph
        self.t = t
        self.amb = amb
        self.A = amb & ~(1 << t)
        self.H = self.A & graph.adj[t]

    def tpow(self, e):
        c = 2 * self.t + (e < 0)
        return Word(self.graph, (c,) * abs(e), canonical=True)

    def decompose(self, g):
        """Reduced product x0 t^e1 x1 ... t^en xn of g: returns (x0, [(e_i, x_i)])."""
        graph = self.graph
        blocks = [[]]
        signs = []
        for c in g.letters:
            if c >> 1 == self.t:
                signs.append(-1 if c & 1 else 1)
                blocks.append([])
            else:
                blocks[-1].append(c)
        xs = [Word(graph, blocks[0])]
        es = []
        for e, b in zip(signs, blocks[1:]):
            x = Word(graph, b)
            if es and xs[-1].in_special(self.H):
                h = xs.pop()
                a = es.pop()
                xs[-1] = xs[-1] * h
                if a + e:
                    es.append(a + e)
                    xs.append(x)
                else:
                    xs[-1] = xs[-1] * x
            else:
                es.append(e)
                xs.append(x)
        return xs[0], list(zip(es, xs[1:]))

    def compose(self, x0, syl):
        out = x0
        for e, x in syl:
            out = out * self.tpow(e) * x
        return out

    def cyclic(self, g):
        """g = c * core * c^-1 with core = t^e1 x1 ... t^en xn cyclically reduced.

        Returns (c, syllables); empty syllables mean g is conjugate into <A>,
        and then the core is c^-1 g c.
        """
        c = Word.identity(self.graph)
        while True:
            x0, syl = self.decompose(g)
            if not syl:
                return c, []
            g = ~x0 * g * x0
            c = c * x0
            e_last, x_last = syl[-1]
            last = x_last * x0
            syl = syl[:-1] + [(e_last, last)]
            if len(syl) == 1 or not last.in_special(self.H):
                return c, syl
            m = self.tpow(e_last) * last
            g = m * g * ~m
            c = c * ~m

    def prefix(self, syl, k):
        return self.compose(Word.identity(self.graph), syl[:k])


@dataclass
class CentralizerData:
    """Generators of C_B(g) together with the structure they came from.

    kind is one of
      'trivial'  B is empty, or nothing but 1 centralizes g
      'all'      g = 1, every element of <B> centralizes it
      'product'  outer^-1 C outer = <t> x C_H(x)
      'triple'   outer^-1 C outer = C_H(core) <core> Omega
      'special'  C = w C_P(w^-1 g w) w^-1 for a parabolic w<P>w^-1
    conj is a conjugator putting the subgroup in standard position whenever
    the subgroup happens to be parabolic.
    """
    element: Word
    subgroup: int
    generators: list
    kind: str
    conj: Word
    outer: Word = None
    core: Word = None
    stable: Word = None
    assoc: int = 0
    omega: list = field(default_factory=list)
    inner: "CentralizerData" = None

    def names(self):
        return self.element.graph.names(self.subgroup)

    def contains(self, c):
        """Exact membership: c ∈ <B> and c commutes with g."""
        return c.in_special(self.subgroup) and c.commutes(self.element)

    def in_description(self, c, bound=4):
        """Is c in the bounded product set of the structural description?"""
        g = self.element
        if self.kind in ("trivial",):
            return not c
        if self.kind == "all":
            return c.in_special(self.subgroup)
        if self.kind == "special":
            return self.inner.in_description(~self.outer * c * self.outer, bound)
        d = ~self.outer * c * self.outer
        if self.kind == "product":
            x = self.core
            for l in range(-bound, bound + 1):
                r = d * self.stable ** (-l)
                if r.in_special(self.assoc) and r.commutes(x):
                    return True
            return False
        k = self.core
        omegas = [Word.identity(g.graph)] + [w for _, _, w in self.omega]
        for w in omegas:
            for l in range(-bound, bound + 1):
                r = d * ~w * k ** (-l)
                if r.in_special(self.assoc) and r.commutes(k):
                    return True
        return False

    def as_parabolic(self):
        """The subgroup as a Parabolic, valid when it is known to be one.

        The type is read off the abelianization (a parabolic h<P>h^-1 maps onto
        the coordinate lattice of P); the conjugator is the one tracked through
        the recursion.  Raises if a generator falls outside the answer.
        """
        graph = self.element.graph
        P = 0
        for w in self.generators:
            for i, s in enumerate(w.exponent_sums()):
                if s:
                    P |= 1 << i
        p = Parabolic(self.conj, P)
        for w in self.generators:
            if w not in p:
                raise ValueError("centralizer is not the tracked parabolic")
        return p


class Solver:
    """Conjugacy and centralizer procedures over one graph.

    route selects how conjugacy in a whole special subgroup is decided:
    'cyclic' compares cyclic cores, 'tower' goes through the HNN splitting
    and the special-subgroup criterion.  meet selects how fold_cosets
    intersects parabolics ('centralizer' or 'recursion').
    """

    def __init__(self, graph, budget=DEFAULT, route="cyclic", meet="centralizer"):
        self.graph = graph
        self.budget = budget
        self.route = route
        self.meet = meet
        self._conj = {}
        self._centr = {}

    def one(self):
        return Word.identity(self.graph)

    # -- conjugacy ------------------------------------------------------

    def conj_full(self, g, f):
        if self.route == "tower":
            return self.conj_tower(g, f)
        return conj_cyclic(g, f, self.budget.nodes)

    def conj_tower(self, g, f):
        """Conjugacy in G through one splitting and the criterion for <H>."""
        if g == f:
            return self.one()
        if not g or not f:
            return None
        amb = g.support_mask() | f.support_mask()
        t = _low(cyclic_reduce(g).core.support_mask())
        sp = Splitting(self.graph, amb, t)
        c1, sg = sp.cyclic(g)
        c2, sf = sp.cyclic(f)
        if not sg:
            raise AssertionError("splitting vertex from the core must give n >= 1")
        if not sf or len(sf) != len(sg):
            return None
        pat = [e for e, _ in sg]
        core_g = sp.compose(self.one(), sg)
        core_f = sp.compose(self.one(), sf)
        for k in range(len(sf)):
            if [e for e, _ in sf[k:] + sf[:k]] != pat:
                continue
            p = sp.prefix(sf, k)
            fk = ~p * core_f * p
            h = self.conj_sub(sp.H, core_g, fk)
            if h is not None:
                return c2 * p * h * ~c1
        return None

    def conj_sub(self, B, g, f):
        """Some b ∈ <B> with b g b^-1 = f, or None."""
        key = (B, g.letters, f.letters)
        if key in self._conj:
            return self._conj[key]
        out = self._conj_sub(B, g, f)
        if out is not None:
            assert out.in_special(B) and out * g * ~out == f
        self._conj[key] = out
        return out

    def _conj_sub(self, B, g, f):
        if g == f:
            return self.one()
        amb = B | g.support_mask() | f.support_mask()
        if amb == B:
            return self.conj_full(g, f)
        if not B:
            return None
        sp = Splitting(self.graph, amb, _low(amb & ~B))
        x0, sx = sp.decompose(g)
        y0, sy = sp.decompose(f)
        if not sx or not sy:
            return None
        # (i) syllable pattern
        if [e for e, _ in sx] != [e for e, _ in sy]:
            return None
        xs = [x0] + [x for _, x in sx]
        ys = [y0] + [y for _, y in sy]
        X, Y = _prod(xs), _prod(ys)
        # (ii) the base products are B-conjugate
        b0 = self.conj_sub(B, X, Y)
        if b0 is None:
            return None
        # (iii) b0 C_B(X) meets every (y0..yi) <H> (x0..xi)^-1
        cosets = [(self.one(), B, self.one())]
        Xi, Yi = self.one(), self.one()
        for i in range(len(sx)):
            Xi, Yi = Xi * xs[i], Yi * ys[i]
            cosets.append((Yi, sp.H, ~Xi))
        folded = fold_cosets(cosets, self, self.meet)
        if folded is None:
            return None
        W, z = folded
        y = ~b0 * z
        D = Parabolic(~z * W.conj, W.base)
        c = self.coset_meet(B, X, D, y)
        if c is None:
            return None
        return b0 * c

    def coset_meet(self, B, g, D, y):
        """Some c ∈ C_B(g) with c^-1 y ∈ D (so y ∈ C_B(g) D), or None."""
        folded = fold_cosets([(D.conj, D.base, ~D.conj), (self.one(), B, y)], self, self.meet)
        if folded is None:
            return None
        W, e = folded
        s = y * ~e
        g2 = ~s * g * s
        u = W.conj
        q = self.conj_sub(W.base, ~u * g * u, ~u * g2 * u)
        if q is None:
            return None
        c = s * q.conj(u)
        assert c.in_special(B) and c.commutes(g) and (~c * y) in D
        return c

    # -- centralizers ---------------------------------------------------

    def centr_full(self, amb, g):
        key = ("full", amb, g.letters)
        if key not in self._centr:
            self._centr[key] = self._centr_full(amb, g)
        return self._centr[key]

    def _centr_full(self, amb, g):
        graph = self.graph
        one = self.one()
        if not g:
            gens = [Word(graph, (2 * i,), canonical=True) for i in range(len(graph)) if amb >> i & 1]
            return CentralizerData(g, amb, gens, "all", one)
        cf = cyclic_reduce(g)
        t = _low(cf.core.support_mask())
        sp = Splitting(graph, amb, t)
        c, syl = sp.cyclic(cf.core)
        if not syl:
            raise AssertionError("splitting vertex from the core must give n >= 1")
        outer = cf.conj * c
        k = sp.compose(one, syl)
        tw = sp.tpow(1)
        e_last, x_last = syl[-1]
        if x_last.in_special(sp.H):
            inner = self.centr_full(sp.H, x_last)
            local = [tw] + inner.generators
            gens = [w.conj(outer) for w in local]
            return CentralizerData(g, amb, gens, "product", outer * inner.conj, outer=outer,
                                   core=x_last, stable=tw, assoc=sp.H, inner=inner)
        omega = []
        for i in range(1, len(syl)):
            p = sp.prefix(syl, i)
            h1 = self.conj_sub(sp.H, k, ~p * k * p)
            if h1 is not None:
                h = ~h1
                omega.append((p, h, h * ~p))
        inner = self.centr_sub(sp.H, k)
        local = list(inner.generators) + [k] + [w for _, _, w in omega]
        gens = [w.conj(outer) for w in local]
        return CentralizerData(g, amb, gens, "triple", outer, outer=outer, core=k,
                               assoc=sp.H, omega=omega, inner=inner)

    def centr_sub(self, B, g):
        key = ("sub", B, g.letters)
        if key not in self._centr:
            C = self._centr_sub(B, g)
            for w in C.generators:
                assert w.in_special(B) and w.commutes(g)
            self._centr[key] = C
        return self._centr[key]

    def _centr_sub(self, B, g):
        graph = self.graph
        one = self.one()
        if not B:
            return CentralizerData(g, 0, [], "trivial", one)
        amb = B | g.support_mask()
        if amb == B:
            return self.centr_full(B, g)
        sp = Splitting(graph, amb, _low(amb & ~B))
        x0, syl = sp.decompose(g)
        xs = [x0] + [x for _, x in syl]
        X = _prod(xs)
        W = Parabolic(one, B)
        Xi = one
        for i in range(len(syl)):
            Xi = Xi * xs[i]
            W = intersect_parabolics(W, Parabolic(Xi, sp.H))
        w = W.conj
        inner = self.centr_sub(W.base, ~w * X * w)
        gens = [a.conj(w) for a in inner.generators]
        return CentralizerData(g, B, gens, "special", w * inner.conj, outer=w, inner=inner)


def _prod(ws):
    out = ws[0]
    for w in ws[1:]:
        out = out * w
    return out


def conj_cyclic(g, f, cap=None):
    """Conjugator c with c g c^-1 = f via cyclic cores, or None.

    Cyclically reduced conjugates are connected by moving a prefix of some
    reduced word to the end; the class of the core of g under such moves is
    explored breadth first.
    """
    cap = cap or DEFAULT.nodes
    if g == f:
        return Word.identity(g.graph)
    cg, cf = cyclic_reduce(g), cyclic_reduce(f)
    g0, f0 = cg.core, cf.core
    if len(g0) != len(f0) or g0.support_mask() != f0.support_mask():
        return None
    if g0.exponent_sums() != f0.exponent_sums():
        return None
    seen = {g0: Word.identity(g.graph)}
    queue = deque([g0])
    found = g0 if g0 == f0 else None
    while queue and found is None:
        w = queue.popleft()
        a = seen[w]
        for u, v in prefix_splits(w, cap):
            w2 = v * u
            if w2 not in seen:
                seen[w2] = a * u
                if len(seen) > cap:
                    raise BudgetExceeded("cyclic conjugacy class", len(seen))
                if w2 == f0:
                    found = w2
                    break
                queue.append(w2)
    if found is None:
        return None
    a = seen[found]
    return cf.conj * ~a * ~cg.conj


# public API --------------------------------------------------------------

@dataclass(frozen=True)
class ConjCertificate:
    conjugate: bool
    conjugator: Word = None
    reason: str = ""
    witness: object = None

    def to_json(self):
        if self.conjugate:
            return {"type": "conjugator", "value": str(self.conjugator)}
        if self.witness is not None and hasattr(self.witness, "to_json"):
            d = {"type": "finite_quotient"}
            d.update(self.witness.to_json())
            return d
        return {"type": "refusal", "reason": self.reason}


def _refusal_reason(g, f):
    cg, cf = cyclic_reduce(g), cyclic_reduce(f)
    if g.exponent_sums() != f.exponent_sums():
        return "abelianization"
    if cg.core.support_mask() != cf.core.support_mask():
        return "core support"
    return "cyclic class"


def conjugate_g(g, f, solver=None):
    """Decide whether f is conjugate to g; certificate carries c with c g c^-1 = f."""
    solver = solver or Solver(g.graph)
    c = conj_cyclic(g, f, solver.budget.nodes) if solver.route == "cyclic" else solver.conj_tower(g, f)
    if c is None:
        return ConjCertificate(False, reason=_refusal_reason(g, f))
    assert c * g * ~c == f
    return ConjCertificate(True, c)


def conjugate_sub(B, g, f, solver=None):
    """Decide f ∈ g^<B> with a witness b ∈ <B>."""
    graph = g.graph
    solver = solver or Solver(graph)
    B = as_mask(graph, B)
    if B == graph.full:
        return conjugate_g(g, f, solver)
    b = solver.conj_sub(B, g, f)
    if b is None:
        return ConjCertificate(False, reason="special-subgroup criterion")
    return ConjCertificate(True, b)


def conjugate_tower(g, f):
    return conjugate_g(g, f, Solver(g.graph, route="tower"))


def centralizer(g, solver=None):
    solver = solver or Solver(g.graph)
    return solver.centr_full(g.graph.full, g)


def centralizer_in_special(B, g, solver=None):
    graph = g.graph
    solver = solver or Solver(graph)
    B = as_mask(graph, B)
    if B == graph.full:
        return solver.centr_full(B, g)
    return solver.centr_sub(B, g)


def centr_coset_member(C, D, z, solver=None, method="race", budget=None):
    """Decide z ∈ C D for C = C_B(g) (CentralizerData) and a Parabolic D.

    method='race' runs a word enumerator in C's generators against a
    finite-quotient search; method='exact' reduces to conjugacy in a
    parabolic subgroup and never comes back undecided.
    Returns a Decision from module quotient in both cases.
    """
    from .quotient import Decision, race, coset_no_enumerator, coset_yes_enumerator
    graph = z.graph
    if method == "exact":
        solver = solver or Solver(graph)
        c = solver.coset_meet(C.subgroup, C.element, D, z)
        if c is None:
            return Decision("no", None)
        return Decision("yes", c)
    budget = budget or (solver.budget if solver else DEFAULT)
    return race(coset_yes_enumerator(C, D, z), coset_no_enumerator(C, D, z, budget),
                steps=budget.race_steps)
