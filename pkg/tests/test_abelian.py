import random

import pytest
from hypothesis import given, strategies as st

from bitwisted import abelian, core
from bitwisted.abelian import AbelianHom, FgAbelianGroup
from bitwisted.errors import InfiniteDual, NotWellDefined

import oracles

SMALL = [g for n in range(1, 33) for g in abelian.abelian_groups_of_order(n)]


def test_group_counts_by_order():
    # number of abelian groups of order n is the product of partition counts of the exponents
    assert [len(abelian.abelian_groups_of_order(n)) for n in (1, 8, 16, 32, 64, 72)] == [1, 3, 5, 7, 11, 6]
    assert sum(len(abelian.abelian_groups_of_order(n)) for n in range(1, 65)) == 117


def test_invariants_normalised():
    assert FgAbelianGroup.from_factors([2, 3]).invariants == (6,)
    assert FgAbelianGroup.from_factors([4, 6]).invariants == (2, 12)
    assert str(FgAbelianGroup((2, 4), 1)) == "Z_2 + Z_4 + Z"
    with pytest.raises(NotWellDefined):
        FgAbelianGroup((2, 3))


def test_ill_defined_matrix_rejected():
    G = FgAbelianGroup((2, 4))
    with pytest.raises(NotWellDefined):
        AbelianHom(G, [[1, 0], [1, 1]])   # Z_2 -> Z_4 must land in 2 Z_4
    AbelianHom(G, [[1, 0], [2, 1]])


def test_endomorphism_enumeration_matches_formula():
    for G in SMALL:
        if G.order <= 16:
            assert len(set(abelian.all_endomorphisms(G))) == abelian.endomorphism_count(G)


def test_spec_example_c12():
    G = FgAbelianGroup((12,))
    phi, psi = AbelianHom.scalar(G, 5), AbelianHom.scalar(G, 1)
    assert abelian.reidemeister_abelian(G, phi, psi) == 4
    assert abelian.dual_coincidence_count(G, phi, psi) == 4
    assert abelian.verify_bitwisted_bf(G, phi, psi).passed


def test_free_part_gives_infinity():
    G = FgAbelianGroup((2,), 1)
    ident = AbelianHom.scalar(G, 1)
    assert abelian.reidemeister_abelian(G, ident, ident) == abelian.INFINITE
    minus = AbelianHom(G, [[1, 0], [0, -1]])
    assert abelian.reidemeister_abelian(G, ident, minus) == 2 * 2
    with pytest.raises(InfiniteDual):
        abelian.dual_group(G)


def test_characters_are_homomorphisms():
    G = FgAbelianGroup((2, 6))
    els = G.elements()
    for chi in abelian.characters(G):
        for x in els[::3]:
            for y in els[::5]:
                s = G.reduce([a + b for a, b in zip(x, y)])
                assert chi.phase(s) == (chi.phase(x) + chi.phase(y)) % 1


def test_dual_map_is_precomposition():
    rng = random.Random(1)
    G = FgAbelianGroup((2, 4, 8))
    for _ in range(10):
        phi = abelian.random_endomorphism(G, rng)
        hat = abelian.induced_dual_map(phi)
        for chi in abelian.characters(G)[::7]:
            image = abelian.DualCharacter(G, hat(chi.y))
            assert all(image.phase(x) == chi.phase(phi(x)) for x in G.elements())


@given(st.sampled_from([g for g in SMALL if g.order <= 24]), st.randoms(use_true_random=False))
def test_three_counts_match_oracles(G, rng):
    phi = abelian.random_endomorphism(G, rng)
    psi = abelian.random_endomorphism(G, rng)
    R = oracles.abelian_twisted_count(G.invariants, phi.matrix, psi.matrix)
    assert abelian.reidemeister_abelian(G, phi, psi) == R
    assert abelian.dual_coincidence_count(G, phi, psi) == oracles.abelian_coincidences(G.invariants, phi.matrix,
                                                                                         psi.matrix)
    rep = abelian.verify_bitwisted_bf(G, phi, psi)
    assert rep.brute_force == R and rep.passed


@given(st.sampled_from(SMALL), st.randoms(use_true_random=False))
def test_realized_map_is_homomorphism(G, rng):
    FG = abelian.realize(G)
    phi = abelian.random_endomorphism(G, rng)
    m = abelian.realize_map(G, phi, FG)
    assert m.validated
    FG.check()


@given(st.sampled_from(SMALL), st.randoms(use_true_random=False))
def test_swap_symmetry(G, rng):
    # classes of (phi, psi) and (psi, phi) are inverse images of each other
    phi = abelian.random_endomorphism(G, rng)
    psi = abelian.random_endomorphism(G, rng)
    assert abelian.reidemeister_abelian(G, phi, psi) == abelian.reidemeister_abelian(G, psi, phi)


def test_report_dict():
    G = FgAbelianGroup((12,))
    d = abelian.verify_bitwisted_bf(G, AbelianHom.scalar(G, 5), AbelianHom.scalar(G, 1)).to_dict()
    assert d["mode"] == "abelian" and d["status"] == "PASS"
    assert (d["brute_force"], d["snf_index"], d["dual_coincidences"]) == (4, 4, 4)


def test_trivial_group():
    G = FgAbelianGroup(())
    z = AbelianHom(G, [])
    assert abelian.verify_bitwisted_bf(G, z, z).passed
    assert core.reidemeister_number(abelian.realize(G), core.identity_map(abelian.realize(G)),
                                    core.identity_map(abelian.realize(G))) == 1
