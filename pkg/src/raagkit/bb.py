"""Kernels N of maps G -> Z^k, and conjugacy inside them.

Conjugators from x to y form the coset c0 C(x), so y is conjugate to x by
an element of N exactly when -psi(c0) lies in the lattice spanned by the
psi-images of generators of C(x).  That is integer linear algebra.
"""

from dataclasses import dataclass

from .conjugacy import ConjCertificate, Solver, centralizer, conjugate_g
from .word import Word


@dataclass(frozen=True)
class AbelianQuotientMap:
    graph: object
    rank: int
    matrix: tuple  # one integer vector per vertex, in vertex order

    @classmethod
    def bb(cls, graph):
        return cls(graph, 1, tuple((1,) for _ in graph.vertices))

    @classmethod
    def from_json(cls, graph, data):
        if data == "bb":
            return cls.bb(graph)
        k = data["rank"]
        rows = []
        for v in graph.vertices:
            vec = tuple(data["map"].get(v, [0] * k))
            if len(vec) != k or not all(isinstance(a, int) for a in vec):
                raise ValueError(f"map entry for {v!r}: expected {k} integers")
            rows.append(vec)
        return cls(graph, k, tuple(rows))

    def is_bb(self):
        return self.rank == 1 and all(r == (1,) for r in self.matrix)

    def to_json(self):
        return {"rank": self.rank, "map": {v: list(r) for v, r in zip(self.graph.vertices, self.matrix)}}


def ab_image(psi, g):
    out = [0] * psi.rank
    for c in g.letters:
        row = psi.matrix[c >> 1]
        s = -1 if c & 1 else 1
        for j in range(psi.rank):
            out[j] += s * row[j]
    return tuple(out)


def in_kernel(psi, g):
    return not any(ab_image(psi, g))


def bb_is_fg(graph, psi=None):
    """Finite generation of the Bestvina-Brady kernel: connectivity of the graph."""
    if psi is not None and not psi.is_bb():
        raise ValueError("the connectivity criterion applies only to the all-ones map")
    return graph.is_connected()


class Lattice:
    """Subgroup of Z^k spanned by integer vectors, in Hermite-style echelon form.

    Each basis row carries its expression in the original generators, so
    membership comes with coefficients.
    """

    def __init__(self, gens, k):
        self.k = k
        self.gens = [tuple(g) for g in gens]
        m = len(self.gens)
        rows = [(list(g), [int(i == j) for j in range(m)]) for i, g in enumerate(self.gens)]
        basis = []
        for col in range(k):
            live = [r for r in rows if r[0][col]]
            rest = [r for r in rows if not r[0][col]]
            while len(live) > 1:
                live.sort(key=lambda r: (abs(r[0][col]), r[0], r[1]))
                p = live[0]
                nxt = [p]
                for r in live[1:]:
                    q = r[0][col] // p[0][col]
                    v = [a - q * b for a, b in zip(r[0], p[0])]
                    t = [a - q * b for a, b in zip(r[1], p[1])]
                    (nxt if v[col] else rest).append((v, t))
                live = nxt
            if live:
                v, t = live[0]
                if v[col] < 0:
                    v, t = [-a for a in v], [-a for a in t]
                basis.append((col, v, t))
            rows = rest
        # reduce entries above pivots
        for i, (col, v, t) in enumerate(basis):
            for j in range(i):
                c2, v2, t2 = basis[j]
                q = v2[col] // v[col]
                if q:
                    basis[j] = (c2, [a - q * b for a, b in zip(v2, v)], [a - q * b for a, b in zip(t2, t)])
        self.basis = basis

    def solve(self, vec):
        """Integer coefficients c with sum c_i gens_i = vec, or None."""
        v = list(vec)
        coef = [0] * len(self.gens)
        for col, b, t in self.basis:
            if v[col] % b[col]:
                return None
            q = v[col] // b[col]
            v = [a - q * x for a, x in zip(v, b)]
            coef = [a + q * x for a, x in zip(coef, t)]
        if any(v):
            return None
        return coef

    def __contains__(self, vec):
        return self.solve(vec) is not None

    def rows(self):
        return [tuple(v) for _, v, _ in self.basis]


def bb_conjugate(psi, x, y, solver=None):
    """Decide whether y = c x c^-1 for some c in N = ker psi."""
    if not in_kernel(psi, x) or not in_kernel(psi, y):
        raise ValueError("both elements must lie in the kernel")
    graph = x.graph
    solver = solver or Solver(graph)
    cert = conjugate_g(x, y, solver)
    if not cert.conjugate:
        return cert
    c0 = cert.conjugator
    target = tuple(-a for a in ab_image(psi, c0))
    if not any(target):
        return ConjCertificate(True, c0, reason="conjugator already in the kernel")
    gens = centralizer(x, solver).generators
    lat = Lattice([ab_image(psi, g) for g in gens], psi.rank)
    coef = lat.solve(target)
    if coef is None:
        return ConjCertificate(False, reason="lattice", witness=None)
    w = Word.identity(graph)
    for g, k in zip(gens, coef):
        if k:
            w = w * g ** k
    c = c0 * w
    assert in_kernel(psi, c) and c * x * ~c == y
    return ConjCertificate(True, c)
