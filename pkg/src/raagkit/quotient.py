"""Finite quotients: homomorphisms to permutation groups and what is built on them.

A FiniteHom sends the vertices of a special subgroup <J> to permutations;
a FinIndexSubgroup is the full preimage of a subgroup of its image.  On top
of these sit the refinement of a normal subgroup into one invariant under a
family of commuting retractions, searches for quotients separating conjugacy
classes or certifying the centralizer condition, and the two-sided race used
by semi-decision procedures.
"""

import random
import threading
from dataclasses import dataclass, field

from .config import DEFAULT, BudgetExceeded
from .perm import FiniteGroup, conj, identity, inverse, mul
from .word import Word


# -- homomorphisms ----------------------------------------------------------

class FiniteHom:
    """Vertex images in Sym(degree) on the special subgroup <J> (J a bitmask)."""

    def __init__(self, graph, J, images, degree):
        self.graph = graph
        self.J = J
        self.degree = degree
        self.images = {}
        for i in range(len(graph)):
            if J >> i & 1:
                p = tuple(images.get(i, identity(degree)))
                if sorted(p) != list(range(degree)):
                    raise ValueError(f"image of {graph.vertices[i]!r} is not a permutation of degree {degree}")
                self.images[i] = p
        for i in self.images:
            for j in self.images:
                if i < j and graph.adj[i] >> j & 1:
                    a, b = self.images[i], self.images[j]
                    if mul(a, b) != mul(b, a):
                        u, v = graph.vertices[i], graph.vertices[j]
                        raise ValueError(f"edge {u}-{v}: images do not commute")
        self._inv = {i: inverse(p) for i, p in self.images.items()}

    @property
    def identity(self):
        return identity(self.degree)

    def letter(self, c):
        v = c >> 1
        if v not in self.images:
            raise ValueError(f"vertex {self.graph.vertices[v]!r} outside the domain")
        return self._inv[v] if c & 1 else self.images[v]

    def __call__(self, w):
        out = self.identity
        for c in w.letters:
            out = mul(out, self.letter(c))
        return out

    def image(self):
        return self.image_of(self.J)

    def image_of(self, m):
        return FiniteGroup([p for i, p in self.images.items() if m >> i & 1], self.degree)

    def restrict(self, m):
        if m & ~self.J:
            raise ValueError("restriction outside the domain")
        return FiniteHom(self.graph, m, self.images, self.degree)

    def extend_by_retraction(self, amb):
        """This hom composed with the retraction of <amb> onto <J>."""
        if self.J & ~amb:
            raise ValueError("ambient subgroup must contain the domain")
        return FiniteHom(self.graph, amb, self.images, self.degree)

    def to_json(self):
        return {"degree": self.degree,
                "images": {self.graph.vertices[i]: list(p) for i, p in self.images.items()}}

    def __repr__(self):
        return f"FiniteHom(degree={self.degree}, J={sorted(self.graph.names(self.J))})"


def make_hom(graph, J, images):
    """images maps vertex names to one-line permutations (lists)."""
    J = J if isinstance(J, int) else graph.mask(J)
    imgs = {}
    degree = None
    for v, p in images.items():
        i = graph.index[v]
        if not J >> i & 1:
            raise ValueError(f"vertex {v!r} is not in the domain")
        imgs[i] = tuple(p)
        if degree is None:
            degree = len(p)
        elif len(p) != degree:
            raise ValueError("images of different degrees")
    for i in range(len(graph)):
        if J >> i & 1 and i not in imgs:
            raise ValueError(f"no image for vertex {graph.vertices[i]!r}")
    return FiniteHom(graph, J, imgs, degree or 1)


def hom_from_json(graph, data):
    imgs = {graph.index[v]: tuple(p) for v, p in data["images"].items()}
    J = 0
    for i in imgs:
        J |= 1 << i
    return FiniteHom(graph, J, imgs, data["degree"])


def product_hom(homs):
    """Direct product on concatenated domains; kernels intersect."""
    homs = list(homs)
    graph = homs[0].graph
    J = homs[0].J
    for h in homs[1:]:
        if h.J != J:
            raise ValueError("ambient mismatch")
    offsets = []
    d = 0
    for h in homs:
        offsets.append(d)
        d += h.degree
    imgs = {}
    for i in homs[0].images:
        p = []
        for h, o in zip(homs, offsets):
            p.extend(o + j for j in h.images[i])
        imgs[i] = tuple(p)
    return FiniteHom(graph, J, imgs, d)


def trivial_hom(graph, J):
    return FiniteHom(graph, J, {}, 1)


# -- finite-index subgroups -------------------------------------------------

class FinIndexSubgroup:
    """theta^-1(sbar) in <theta.J>, for a subgroup sbar of the image of theta."""

    def __init__(self, hom, sbar=None):
        self.hom = hom
        self.graph = hom.graph
        e = hom.identity
        self.sbar = frozenset([e]) if sbar is None else frozenset(sbar) | {e}
        self._tree = None

    @property
    def J(self):
        return self.hom.J

    def is_kernel(self):
        return len(self.sbar) == 1

    def __contains__(self, w):
        return self.hom(w) in self.sbar

    def image(self):
        return self.hom.image()

    def index(self):
        return self.image().order() // len(self.sbar)

    def is_normal(self):
        return self.image().is_normal(self.sbar)

    def _transversal(self):
        # BFS tree over right cosets sbar*q; entries: key -> (q, word letters)
        if self._tree is None:
            e = self.hom.identity
            single = self.is_kernel()
            sbar = self.sbar

            def key(q):
                return q if single else min(mul(s, q) for s in sbar)

            root = key(e)
            tree = {root: (e, ())}
            order = [root]
            letters = [2 * i for i in sorted(self.hom.images)]
            cap = DEFAULT.group_order
            k = 0
            while k < len(order):
                q, w = tree[order[k]]
                k += 1
                for c in letters:
                    r = mul(q, self.hom.letter(c))
                    kr = key(r)
                    if kr not in tree:
                        tree[kr] = (r, w + (c,))
                        order.append(kr)
                        if len(order) > cap:
                            raise BudgetExceeded("coset enumeration", len(order))
            self._tree = (tree, key, order)
        return self._tree

    def coset_reps(self):
        tree, _, order = self._transversal()
        return [Word(self.graph, tree[k][1]) for k in order]

    def schreier_gens(self):
        """Reidemeister-Schreier generators t_c x t_{cx}^-1 (nontrivial ones only)."""
        tree, key, order = self._transversal()
        out = []
        seen = set()
        for k in order:
            q, w = tree[k]
            for i in sorted(self.hom.images):
                c = 2 * i
                r = mul(q, self.hom.letter(c))
                _, w2 = tree[key(r)]
                g = Word(self.graph, w + (c,) + tuple(d ^ 1 for d in reversed(w2)))
                if g and g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def mapped_schreier_images(self, chi):
        """chi applied to the Schreier generators, computed on permutations."""
        tree, key, order = self._transversal()
        vals = {}
        for k in order:
            q, w = tree[k]
            v = chi.identity
            for c in w:
                v = mul(v, chi.letter(c))
            vals[k] = v
        out = set()
        for k in order:
            q, _ = tree[k]
            for i in sorted(self.hom.images):
                c = 2 * i
                kr = key(mul(q, self.hom.letter(c)))
                out.add(mul(mul(vals[k], chi.letter(c)), inverse(vals[kr])))
        out.discard(chi.identity)
        return sorted(out)

    def as_kernel(self):
        """The same subgroup as the kernel of the action on cosets of sbar."""
        if self.is_kernel():
            return self
        if not self.is_normal():
            raise ValueError("only normal subgroups are kernels")
        tree, key, order = self._transversal()
        pos = {k: n for n, k in enumerate(order)}
        imgs = {}
        for i in self.hom.images:
            p = self.hom.images[i]
            imgs[i] = tuple(pos[key(mul(tree[k][0], p))] for k in order)
        return FinIndexSubgroup(FiniteHom(self.graph, self.J, imgs, len(order)))

    def restrict(self, m):
        """self ∩ <m> as a subgroup of <m>."""
        h = self.hom.restrict(m)
        img = h.image().elements()
        return FinIndexSubgroup(h, self.sbar & img)

    def __repr__(self):
        return f"FinIndexSubgroup({self.hom!r}, |sbar|={len(self.sbar)})"


def kernel(hom):
    return FinIndexSubgroup(hom)


def kernel_schreier_gens(hom):
    return kernel(hom).schreier_gens()


def sub_intersect(subs):
    subs = list(subs)
    if len(subs) == 1:
        return subs[0]
    J = subs[0].J
    for s in subs[1:]:
        if s.J != J:
            raise ValueError("ambient mismatch")
    psi = product_hom([s.hom for s in subs])
    if all(s.is_kernel() for s in subs):
        return FinIndexSubgroup(psi)
    bounds = []
    d = 0
    for s in subs:
        bounds.append((d, d + s.hom.degree))
        d += s.hom.degree

    def project(q, a, b):
        return tuple(j - a for j in q[a:b])

    sbar = [q for q in psi.image().elements()
            if all(project(q, a, b) in s.sbar for s, (a, b) in zip(subs, bounds))]
    return FinIndexSubgroup(psi, sbar)


def sub_preimage(sub, amb):
    """Full preimage of sub (a subgroup of <S>) under the retraction <amb> -> <S>."""
    return FinIndexSubgroup(sub.hom.extend_by_retraction(amb), sub.sbar)


def sub_image_under_retraction(sub, m):
    """rho_m(sub) as a subgroup of <m>.

    sub contains the kernel of its hom, so sub ∩ <m> lies in rho_m(sub) and
    the image is a union of cosets of ker(theta|<m>); it is therefore cut out
    by the subgroup of theta(<m>) generated by theta(rho_m(generators)).
    """
    theta = sub.hom
    chi = theta.restrict(m).extend_by_retraction(theta.J)
    gens = sub.mapped_schreier_images(chi)
    # sbar ⊆ theta(sub) already gives theta(sub ∩ <m>) ⊆ the answer; the
    # generators above cover the rest
    target = theta.restrict(m)
    img = FiniteGroup(gens, theta.degree).elements()
    return FinIndexSubgroup(target, img)


# -- commuting retractions --------------------------------------------------

@dataclass
class Refinement:
    M: FinIndexSubgroup
    retracts: list
    K: FinIndexSubgroup
    levels: dict = field(default_factory=dict)


def invariant_refinement(graph, retracts, K):
    """M ≤ K normal of finite index with rho_S(M) ⊆ M for every retract <S>.

    retracts are vertex sets; K is a normal FinIndexSubgroup of G.  D_J is
    computed for all sets J of retract indices, largest first:
    D_I = K ∩ <S_I>, and for J ≠ I
    D_J = rho_J(⋂_{i∉J} rho_{J+i}^-1(D_{J+i})) ∩ K,
    where S_J is the intersection of the retracts in J.  M = D_∅.
    """
    masks = [r if isinstance(r, int) else graph.mask(r) for r in retracts]
    m = len(masks)
    full = graph.full
    if K.J != full:
        raise ValueError("K must be a subgroup of the whole group")
    Kk = K.as_kernel()

    def S(J):
        out = full
        for i in range(m):
            if J >> i & 1:
                out &= masks[i]
        return out

    D = {}
    top = (1 << m) - 1
    for J in sorted(range(top + 1), key=lambda J: -bin(J).count("1")):
        SJ = S(J)
        if J == top:
            D[J] = Kk.restrict(SJ)
            continue
        pre = [sub_preimage(D[J | 1 << i], full) for i in range(m) if not J >> i & 1]
        X = sub_intersect(pre)
        img = sub_image_under_retraction(X, SJ).as_kernel()
        D[J] = sub_intersect([img, Kk.restrict(SJ)])
    return Refinement(D[0], masks, K, D)


def verify_refinement(ref, words=True):
    """Check M ≤ K, normality, and rho_S(M) ⊆ M generator-wise."""
    M, K = ref.M, ref.K
    report = {"normal": M.is_normal()}
    gens = M.schreier_gens() if words else []
    report["in_K"] = all(g in K for g in gens)
    report["invariant"] = all(g.retract_mask(S) in M for S in ref.retracts for g in gens)
    # permutation-level check of the same statement
    Mk = M.as_kernel()
    ok = True
    for S in ref.retracts:
        chi = Mk.hom.restrict(S).extend_by_retraction(Mk.J)
        if Mk.mapped_schreier_images(chi):
            ok = False
    report["invariant_perm"] = ok
    report["generators"] = len(gens)
    report["ok"] = all(v for k, v in report.items() if k != "generators")
    return report


def check_intersection_preserved(retracts, M):
    """In G/M, the image of <⋂ S_i> equals ⋂ of the images of <S_i>."""
    Mk = M.as_kernel()
    hom = Mk.hom
    graph = hom.graph
    masks = [r if isinstance(r, int) else graph.mask(r) for r in retracts]
    if not masks:
        return True
    meet = graph.full
    for s in masks:
        meet &= s
    lhs = hom.image_of(meet).elements()
    rhs = None
    for s in masks:
        e = hom.image_of(s).elements()
        rhs = e if rhs is None else rhs & e
    return lhs == rhs


# -- candidate homomorphisms ------------------------------------------------

def _random_centralizing(rng, d, p):
    # uniform element of the centralizer of p in Sym(d)
    seen = [False] * d
    cycles = {}
    for i in range(d):
        if not seen[i]:
            c = [i]
            seen[i] = True
            j = p[i]
            while j != i:
                c.append(j)
                seen[j] = True
                j = p[j]
            cycles.setdefault(len(c), []).append(c)
    out = [0] * d
    for L, cs in cycles.items():
        order = cs[:]
        rng.shuffle(order)
        for src, dst in zip(cs, order):
            r = rng.randrange(L)
            for k in range(L):
                out[src[k]] = dst[(k + r) % L]
    return tuple(out)


def _random_perm(rng, d):
    p = list(range(d))
    rng.shuffle(p)
    return tuple(p)


def random_hom(graph, J, d, rng, tries=20):
    """Random images in Sym(d) subject to commuting along edges.

    Vertices are filled in random order, so that a hub is sometimes chosen
    last (and squeezed to the identity) rather than always constraining its
    neighbours.
    """
    imgs = {}
    order = [i for i in range(len(graph)) if J >> i & 1]
    rng.shuffle(order)
    for i in order:
        cons = [imgs[j] for j in imgs if graph.adj[i] >> j & 1]
        if rng.random() < 0.1:
            imgs[i] = identity(d)
            continue
        p = None
        for _ in range(tries):
            cand = _random_centralizing(rng, d, cons[0]) if cons else _random_perm(rng, d)
            if all(mul(cand, q) == mul(q, cand) for q in cons):
                p = cand
                break
        imgs[i] = p if p is not None else identity(d)
    return FiniteHom(graph, J, imgs, d)


def abelian_hom(graph, J, m):
    """Onto (Z/m)^J: vertex i rotates its own block of m points."""
    verts = [i for i in range(len(graph)) if J >> i & 1]
    d = m * len(verts)
    imgs = {}
    for k, i in enumerate(verts):
        p = list(range(d))
        for r in range(m):
            p[k * m + r] = k * m + (r + 1) % m
        imgs[i] = tuple(p)
    return FiniteHom(graph, J, imgs, max(d, 1))


def candidate_homs(graph, J=None, budget=DEFAULT, seed=None):
    """Abelian quotients first, then random permutation images of growing degree."""
    J = graph.full if J is None else J
    rng = random.Random(budget.seed if seed is None else seed)
    n = 0
    for m in (2, 3, 4, 5):
        yield abelian_hom(graph, J, m)
        n += 1
    degrees = list(range(3, budget.max_degree + 1))
    while n < budget.homs:
        for d in degrees:
            if n >= budget.homs:
                break
            yield random_hom(graph, J, d, rng)
            n += 1


# -- witnesses --------------------------------------------------------------

@dataclass
class Witness:
    hom: FiniteHom
    claim: str
    verified: bool
    report: dict = field(default_factory=dict)

    def to_json(self):
        d = self.hom.to_json()
        d["claim"] = self.claim
        d["verified"] = bool(self.verified)
        return d


def _mask(graph, B):
    if B is None:
        return graph.full
    return B if isinstance(B, int) else graph.mask(B)


def verify_separation(hom, g, f, B=None):
    """Exhaustively: hom(f) is not conjugate to hom(g) under hom(<B>)."""
    B = _mask(g.graph, B)
    group = hom.image_of(B)
    return hom(f) not in group.conjugacy_class(hom(g))


def separate_conjugacy(g, f, B=None, budget=DEFAULT, seed=None):
    """A finite quotient in which f is not <B>-conjugate to g.

    Raises BudgetExceeded when the candidate list runs out.
    """
    graph = g.graph
    B = _mask(graph, B)
    n = 0
    for hom in candidate_homs(graph, graph.full, budget, seed):
        n += 1
        try:
            ok = verify_separation(hom, g, f, B)
        except BudgetExceeded:
            continue
        if ok:
            return Witness(hom, "nonconjugate", True, {"tried": n})
    raise BudgetExceeded("separation search", n)


def _block(q, d):
    return q[:d]


def verify_cc(psi, K, B, g, cgens):
    """Check ker psi ≤ K and C_{psi<B>}(psi g) ⊆ psi(C_B(g)) psi(K) in the image.

    psi must carry K's hom on its first K.degree points, which is checked; then
    a psi-image lies in psi(C_B(g)K) iff its first block lies in
    theta(C_B(g)) sbar_K.
    """
    theta = K.hom
    d = theta.degree
    for i, p in psi.images.items():
        if _block(p, d) != theta.images[i]:
            return False
    T = FiniteGroup([theta(c) for c in cgens] + list(K.sbar), d).elements()
    x = psi(g)
    for y in psi.image_of(B).elements():
        if mul(x, y) == mul(y, x) and _block(y, d) not in T:
            return False
    return True


def cc_witness(B, g, K, budget=DEFAULT, seed=None, solver=None):
    """A refinement psi of K's quotient satisfying the centralizer condition for (<B>, g)."""
    from .conjugacy import Solver, centralizer_in_special
    graph = g.graph
    B = _mask(graph, B)
    solver = solver or Solver(graph, budget)
    Kk = K
    C = centralizer_in_special(B, g, solver)
    cgens = C.generators
    theta = Kk.hom
    if verify_cc(theta, Kk, B, g, cgens):
        return Witness(theta, "cc", True, {"strategy": "K"})
    # cosets z_i (B∩K) of B whose conjugate of g is outside g^{B∩K}
    d = theta.degree
    T = FiniteGroup([theta(c) for c in cgens] + list(Kk.sbar), d).elements()
    BK = FinIndexSubgroup(theta.restrict(B), Kk.sbar & theta.image_of(B).elements())
    bad = [z for z in BK.coset_reps() if theta(z) not in T]
    parts = []
    for z in bad:
        fz = ~z * g * z
        phi = _separate_from_subclass(g, fz, B, Kk, budget, seed)
        if phi is None:
            break
        parts.append(phi)
    else:
        psi = product_hom([theta] + parts)
        if verify_cc(psi, Kk, B, g, cgens):
            return Witness(psi, "cc", True, {"strategy": "cosets", "bad": len(bad)})
    n = 0
    for phi in candidate_homs(graph, graph.full, budget, seed):
        n += 1
        psi = product_hom([theta, phi])
        try:
            if verify_cc(psi, Kk, B, g, cgens):
                return Witness(psi, "cc", True, {"strategy": "search", "tried": n})
        except BudgetExceeded:
            continue
    raise BudgetExceeded("centralizer condition search", n)


def _separate_from_subclass(g, f, B, K, budget, seed):
    # phi with (theta x phi)(f) outside the orbit of (theta x phi)(g) under the image of B ∩ K
    graph = g.graph
    theta = K.hom
    d = theta.degree
    for phi in candidate_homs(graph, graph.full, budget, seed):
        psi = product_hom([theta, phi])
        try:
            img = psi.image_of(B).elements()
        except BudgetExceeded:
            continue
        x, y = psi(g), psi(f)
        # conjugate once by every element of the subgroup: linear in its order
        if all(conj(x, q) != y for q in img if _block(q, d) in K.sbar):
            return phi
    return None


# -- one level of lifting through an HNN-splitting -------------------------

@dataclass
class LiftRefusal:
    group: object
    case: int
    g_image: object
    f_image: object
    checked: int


def lift_via_hnn(graph, amb, t, psi, g, f, B):
    """Certify f ∉ g^<B> inside the HNN-extension of psi(A) over psi(H).

    amb is the ambient vertex mask, t the stable vertex, psi a FiniteHom on
    A = amb - t, and B ⊆ A.  The refusal is checked by conjugating with every
    element of the finite group psi(<B>).  Raises ValueError when psi does
    not separate, naming the first case of the argument that fails.
    """
    from .conjugacy import Splitting
    from .hnn import extend_hom
    B = _mask(graph, B)
    ext = extend_hom(graph, amb, t, psi)
    P = ext.P
    sp = Splitting(graph, amb, t)
    x0, sx = sp.decompose(g)
    y0, sy = sp.decompose(f)
    if [e for e, _ in sx] != [e for e, _ in sy]:
        case = 1
    else:
        X = x0
        for _, x in sx:
            X = X * x
        Y = y0
        for _, y in sy:
            Y = Y * y
        QB = psi.image_of(B)
        case = 2 if psi(Y) not in QB.conjugacy_class(psi(X)) else 3
    gi, fi = ext(g), ext(f)
    if case in (1, 3):
        interior = [x for _, x in sx[:-1]] + [y for _, y in sy[:-1]]
        for w in interior:
            if psi(w) in P.hbar:
                raise ValueError(f"case {case}: an interior syllable maps into psi(H)")
    n = 0
    for b in psi.image_of(B).elements():
        n += 1
        bb = P.elem(b)
        if bb * gi * ~bb == fi:
            raise ValueError(f"case {case}: images are conjugate in the HNN-extension")
    return LiftRefusal(P, case, gi, fi, n)


# -- the race ---------------------------------------------------------------

@dataclass
class Decision:
    status: str
    witness: object = None
    spent: dict = field(default_factory=dict)

    @property
    def value(self):
        return {"yes": True, "no": False}.get(self.status)


def race(yes, no, steps=DEFAULT.race_steps):
    """Run a witness enumerator against a refusal enumerator; first hit wins.

    Each enumerator yields None for an unproductive step or a witness.  Both
    workers stop as soon as either finds something or after steps steps.
    """
    done = threading.Event()
    lock = threading.Lock()
    result = {}
    spent = {"yes": 0, "no": 0}

    def run(name, it):
        try:
            for item in it:
                if done.is_set():
                    return
                spent[name] += 1
                if item is not None:
                    with lock:
                        if not done.is_set():
                            result["d"] = (name, item)
                            done.set()
                    return
                if spent[name] >= steps:
                    return
        except BudgetExceeded:
            return

    threads = [threading.Thread(target=run, args=("yes", yes), daemon=True),
               threading.Thread(target=run, args=("no", no), daemon=True)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    done.set()
    if "d" in result:
        name, item = result["d"]
        return Decision(name, item, dict(spent))
    return Decision("undecided", None, dict(spent))


def _closure_words(gens, one):
    # breadth-first enumeration of the group generated by gens, as Words
    seen = {one}
    frontier = [one]
    yield one
    steps = [w for g in gens for w in (g, ~g)]
    while frontier:
        nxt = []
        for w in frontier:
            for s in steps:
                u = w * s
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
                    yield u
        frontier = nxt


def coset_yes_enumerator(C, D, z):
    """Yields c ∈ C with c^-1 z ∈ D once found (None on other steps)."""
    one = Word.identity(z.graph)
    for c in _closure_words(C.generators, one):
        yield c if (~c * z) in D else None


def coset_no_enumerator(C, D, z, budget=DEFAULT):
    """Yields a hom phi with phi(z) ∉ phi(C) phi(D) once found."""
    graph = z.graph
    for phi in candidate_homs(graph, graph.full, budget):
        try:
            Cb = FiniteGroup([phi(c) for c in C.generators], phi.degree).elements()
            Db = FiniteGroup([phi(d) for d in D.generators()], phi.degree).elements()
        except BudgetExceeded:
            yield None
            continue
        x = phi(z)
        if any(mul(inverse(c), x) in Db for c in Cb):
            yield None
        else:
            yield Witness(phi, "coset", True)
