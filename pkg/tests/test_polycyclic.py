import random

import pytest
from hypothesis import given, strategies as st

from bitwisted import core, polycyclic as pc
from bitwisted.errors import DimensionMismatch, DoesNotRespect, NotCompatible, NotUnimodular
from bitwisted.polycyclic import PolyElement, PolyGroup

import oracles

A = [[2, 1], [1, 1]]
G = PolyGroup(A)
AUTOS = pc.search_compatible(G, 1) + pc.search_compatible(G, -1)

elements = st.builds(lambda a, b, t: PolyElement((a, b), t),
                     st.integers(-9, 9), st.integers(-9, 9), st.integers(-4, 4))


def _t(p):
    return (tuple(p.v), p.t)


@given(elements, elements)
def test_multiplication_matches_oracle(p, q):
    assert _t(pc.poly_multiply(G, p, q)) == oracles.poly_mul(A, _t(p), _t(q))
    assert _t(pc.poly_inverse(G, p)) == oracles.poly_inv(A, _t(p))


@given(elements, elements, elements)
def test_associativity(p, q, r):
    lhs = pc.poly_multiply(G, pc.poly_multiply(G, p, q), r)
    assert lhs == pc.poly_multiply(G, p, pc.poly_multiply(G, q, r))


@given(elements, st.integers(-6, 6))
def test_power(p, k):
    expected = pc.poly_identity(G)
    step = p if k >= 0 else pc.poly_inverse(G, p)
    for _ in range(abs(k)):
        expected = pc.poly_multiply(G, expected, step)
    assert pc.poly_power(G, p, k) == expected


def test_defining_relation():
    t = PolyElement((0, 0), 1)
    for w in [(1, 0), (0, 1), (3, -2)]:
        conj = pc.poly_product(G, [t, PolyElement(w, 0), pc.poly_inverse(G, t)])
        assert conj == PolyElement(tuple(sum(a * b for a, b in zip(row, w)) for row in A), 0)


def test_compatible_search_counts():
    assert len(pc.search_compatible(G, 1)) == 14
    assert len(pc.search_compatible(G, -1)) == 14


def test_validation_errors():
    with pytest.raises(NotUnimodular):
        PolyGroup([[2, 0], [0, 1]])
    with pytest.raises(NotCompatible):
        pc.validate_poly_auto(G, [[1, 1], [0, 1]])
    with pytest.raises(NotUnimodular):
        pc.validate_poly_auto(G, [[2, 0], [0, 2]])
    with pytest.raises(DimensionMismatch):
        pc.validate_poly_auto(G, [[1]])


@given(st.sampled_from(AUTOS), st.integers(-2, 2), st.integers(-2, 2), elements, elements)
def test_automorphisms_are_homomorphisms(auto, u0, u1, p, q):
    f = pc.validate_poly_auto(G, auto.M, auto.eps, (u0, u1))
    assert f(pc.poly_multiply(G, p, q)) == pc.poly_multiply(G, f(p), f(q))
    assert _t(f(p)) == oracles.poly_auto_apply(A, f.M, f.eps, f.u, _t(p))


def test_matrix_orders():
    orders = [pc.matrix_order_mod(A, m) for m in range(2, 17)]
    assert orders == [3, 4, 3, 10, 12, 8, 6, 12, 30, 5, 12, 14, 24, 20, 12]


@pytest.mark.parametrize("m", [2, 3, 4])
def test_quotient_is_a_group_with_induced_maps(m):
    rng = random.Random(m)
    phi = pc.validate_poly_auto(G, AUTOS[3].M, AUTOS[3].eps)
    psi = pc.identity_auto(G)
    Q = pc.congruence_quotient(G, m, phi, psi)
    Q.group.check()
    core.validate_homomorphism(Q.group, Q.group, Q.phi)
    assert Q.order == m * m * pc.matrix_order_mod(A, m)
    # projection is a homomorphism compatible with phi
    for _ in range(30):
        p = PolyElement((rng.randint(-9, 9), rng.randint(-9, 9)), rng.randint(-5, 5))
        q = PolyElement((rng.randint(-9, 9), rng.randint(-9, 9)), rng.randint(-5, 5))
        assert Q.project(pc.poly_multiply(G, p, q)) == Q.group.mul[Q.project(p), Q.project(q)]
        assert Q.project(phi(p)) == Q.phi(Q.project(p))


def test_every_modulus_respected_for_hyperbolic_a():
    # A - I is invertible over Z, so the twist sum (u, eps)^L always vanishes mod m
    for auto in AUTOS[::3]:
        f = pc.validate_poly_auto(G, auto.M, auto.eps, (1, 1))
        for m in range(2, 10):
            pc.congruence_quotient(G, m, f, pc.identity_auto(G))


def test_non_respecting_modulus_raises():
    # unipotent action: (u, 1)^m = (m(m-1)/2, m) for u = (0, 1), nonzero mod even m
    H = PolyGroup([[1, 1], [0, 1]])
    phi = pc.validate_poly_auto(H, [[1, 0], [0, 1]], 1, (0, 1))
    raised = []
    for m in range(2, 10):
        try:
            pc.congruence_quotient(H, m, phi, pc.identity_auto(H))
        except DoesNotRespect:
            raised.append(m)
    assert raised == [2, 4, 6, 8]
    d = pc.decide_twisted_conjugacy(H, phi, pc.identity_auto(H), PolyElement((0, 0), 0), PolyElement((0, 0), 0),
                                    shells=0, max_modulus=2)
    assert d.verdict == "EXHAUSTED" and "skipped" in d.transcript[0]


def test_spec_decision_examples():
    ident = pc.identity_auto(G)
    d = pc.decide_twisted_conjugacy(G, ident, ident, PolyElement((0, 0), 0), PolyElement((1, 0), 0))
    assert d.verdict == "NO" and d.modulus == 2
    assert pc.verify_decision(G, ident, ident, PolyElement((0, 0), 0), PolyElement((1, 0), 0), d)
    e = pc.decide_twisted_conjugacy(G, ident, ident, PolyElement((0, 0), 0), PolyElement((1, 0), 0),
                                    shells=0, max_modulus=1)
    assert e.verdict == "EXHAUSTED"


@given(st.sampled_from(AUTOS), st.sampled_from(AUTOS), elements,
       st.builds(lambda a, b, t: PolyElement((a, b), t), st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)))
def test_constructed_yes_instances(phi, psi, U, gamma):
    V = pc.twisted_image(G, phi, psi, gamma, U)
    d = pc.decide_twisted_conjugacy(G, phi, psi, U, V, shells=3, max_modulus=6)
    assert d.verdict == "YES"
    w = d.witness
    # independent check with the oracle arithmetic
    lhs = oracles.poly_mul(A, oracles.poly_mul(A, oracles.poly_auto_apply(A, psi.M, psi.eps, psi.u, _t(w)), _t(U)),
                           oracles.poly_inv(A, oracles.poly_auto_apply(A, phi.M, phi.eps, phi.u, _t(w))))
    assert lhs == _t(V)


def test_shell_sizes():
    for r in range(4):
        elems = list(pc.shell(2, r))
        assert len(elems) == (2 * r + 1) ** 3 - max(2 * r - 1, 0) ** 3
        assert len(set(elems)) == len(elems)


def test_quotient_bound_rows():
    phi = pc.validate_poly_auto(G, [[0, 1], [-1, 0]], -1)
    qb = pc.quotient_class_lower_bound(G, phi, pc.identity_auto(G), range(2, 9))
    counts = [r["classes"] for r in qb.rows]
    assert counts == [2, 2, 2, 2, 4, 2, 4]
    assert qb.bound == 4
