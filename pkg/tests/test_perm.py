import itertools

import pytest
from hypothesis import given, strategies as st

from raagkit.config import Budget, BudgetExceeded
from raagkit.perm import (FiniteGroup, conj, cycle, direct, from_cycles, identity, inverse, mul,
                          power, small_groups, symmetric_group)

import oracles

ORDERS = {"C2": 2, "C3": 3, "C4": 4, "C2xC2": 4, "C5": 5, "C6": 6, "S3": 6,
          "D4": 8, "Q8": 8, "A4": 12, "D6": 12, "S4": 24}

perms = st.integers(2, 6).flatmap(lambda n: st.permutations(range(n)).map(tuple))


def test_small_group_orders():
    groups = small_groups()
    for name, n in ORDERS.items():
        G = groups[name]
        assert G.order() == n == len(oracles.closure(G.gens, G.degree))


def test_small_group_shapes():
    g = small_groups()
    assert g["C2xC2"].is_abelian() and not g["S3"].is_abelian()
    q8 = g["Q8"]
    involutions = [x for x in q8.elements() if x != q8.identity and mul(x, x) == q8.identity]
    assert len(involutions) == 1 and not q8.is_abelian()
    assert sorted(len(q8.conjugacy_class(x)) for x in q8.elements()) == [1, 1, 2, 2, 2, 2, 2, 2]


def test_right_action():
    p, q = cycle(3, 0, 1), cycle(3, 1, 2)
    # apply p then q
    assert mul(p, q) == tuple(q[p[i]] for i in range(3))
    assert conj(p, q) == mul(mul(inverse(q), p), q)


def test_cap():
    with pytest.raises(BudgetExceeded):
        FiniteGroup(symmetric_group(6).gens, 6, cap=100).elements()


def test_normality_and_centralizer():
    S3 = symmetric_group(3)
    A3 = [identity(3), cycle(3, 0, 1, 2), cycle(3, 0, 2, 1)]
    assert S3.is_normal(A3)
    assert not S3.is_normal([identity(3), cycle(3, 0, 1)])
    assert S3.centralizer(cycle(3, 0, 1, 2)) == frozenset(A3)


def test_transversal_counts_cosets():
    S4 = symmetric_group(4)
    H = S4.subgroup([cycle(4, 0, 1), cycle(4, 0, 1, 2)]).elements()
    tree, key = S4.transversal(H)
    assert len(tree) == 4
    reps = [r for r, _, _ in tree.values()]
    assert len({frozenset(mul(h, r) for h in H) for r in reps}) == 4


@given(perms, st.integers(-7, 7))
def test_power_and_inverse(p, k):
    n = len(p)
    assert mul(p, inverse(p)) == identity(n)
    naive = identity(n)
    for _ in range(abs(k)):
        naive = mul(naive, p if k > 0 else inverse(p))
    assert power(p, k) == naive


@given(perms, perms)
def test_direct_product(p, q):
    r = direct(p, q)
    assert len(r) == len(p) + len(q)
    assert mul(direct(p, q), direct(p, q)) == direct(mul(p, p), mul(q, q))


def test_from_cycles():
    assert from_cycles(4, [(0, 1), (2, 3)]) == (1, 0, 3, 2)
