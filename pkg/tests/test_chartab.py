import numpy as np
import pytest
from hypothesis import given, strategies as st

from bitwisted import chartab, core
from bitwisted.errors import NotAutomorphism
from bitwisted.groups import SUITE, cyclic, symmetric

DEGREES = {"S3": [1, 1, 2], "D4": [1, 1, 1, 1, 2], "Q8": [1, 1, 1, 1, 2], "A4": [1, 1, 1, 3],
           "D6": [1, 1, 1, 1, 2, 2]}


@pytest.fixture(scope="module")
def tables():
    out = {}
    for name, make in SUITE.items():
        G = make()
        out[name] = (G, chartab.character_table(G))
    return out


@pytest.mark.parametrize("name", list(SUITE))
def test_degrees_and_integrity(tables, name):
    G, T = tables[name]
    assert sorted(T.degrees) == DEGREES[name]
    assert sum(d * d for d in T.degrees) == G.order
    assert len(T) == T.classes.count
    assert T.orthogonality_residual() < 1e-8
    assert np.allclose(T.values[0], 1)


def test_s3_table_values(tables):
    _, T = tables["S3"]
    rows = {tuple(np.round(T.values[i].real).astype(int)) for i in range(3)}
    sizes = T.classes.sizes
    # columns ordered identity, transpositions, 3-cycles
    assert sizes == (1, 3, 2)
    assert rows == {(1, 1, 1), (1, -1, 1), (2, 0, -1)}


def test_a4_has_complex_characters(tables):
    _, T = tables["A4"]
    assert np.abs(T.values.imag).max() > 0.5


def test_class_coefficients_identity_row():
    G = symmetric(4)
    cd = chartab.class_data(G)
    a = chartab.class_mult_coefficients(G, cd)
    # the identity class acts as the identity matrix
    assert np.array_equal(a[0], np.eye(cd.count, dtype=int))
    # a[i][j][0] counts inverse pairs: |C_i| if C_j is the inverse class of C_i
    for i in range(cd.count):
        j = int(cd.class_of[G.inv[cd.reps[i]]])
        assert a[i, j, 0] == cd.sizes[i]


def test_values_are_algebraic_integers_via_central_characters(tables):
    # |C_k| chi(g_k) / chi(1) are eigenvalues of integer matrices, hence rounding-stable sums
    G, T = tables["D6"]
    w = T.values * np.array(T.classes.sizes) / T.values[:, [0]]
    a = chartab.class_mult_coefficients(G, T.classes)
    for i in range(T.classes.count):
        for j in range(T.classes.count):
            lhs = w[:, i] * w[:, j]
            rhs = w @ a[i, j]
            assert np.allclose(lhs, rhs)


@pytest.mark.parametrize("name", list(SUITE))
def test_compact_bf_all_pairs(tables, name):
    G, T = tables[name]
    autos = core.automorphisms(G)
    for phi in autos:
        for psi in autos:
            rep = chartab.verify_compact_bf(G, phi, psi, T)
            assert rep.passed, (phi.image, psi.image)


@pytest.mark.parametrize("name", list(SUITE))
def test_brauer_permutation_lemma(tables, name):
    G, T = tables[name]
    for alpha in core.automorphisms(G):
        p = chartab.dual_action(T, alpha)
        fixed_chars = sum(1 for i, j in enumerate(p) if i == j)
        assert fixed_chars == chartab.fixed_class_count(G, alpha, T.classes)


def test_dual_action_rejects_non_bijective(tables):
    G, T = tables["S3"]
    with pytest.raises(NotAutomorphism):
        chartab.dual_action(T, core.trivial_map(G))


def test_counterexample_reports(tables):
    s3 = chartab.counterexample_report(*tables["S3"])
    d4 = chartab.counterexample_report(*tables["D4"])
    assert (s3.reidemeister, s3.coincidences) == (6, 3) and s3.inequality and s3.passed
    assert (d4.reidemeister, d4.coincidences) == (8, 5) and d4.inequality and d4.passed
    c6 = chartab.counterexample_report(cyclic(6))
    assert not c6.inequality and c6.passed
    assert c6.to_dict()["relation"] == "EQUALITY"


@given(st.integers(1, 24), st.integers(0, 5))
def test_cyclic_tables_are_roots_of_unity(n, seed):
    G = cyclic(n)
    T = chartab.character_table(G, seed=seed)
    assert len(T) == n
    assert np.allclose(np.abs(T.values), 1)
    assert T.orthogonality_residual() < 1e-8


@given(st.integers(0, 1000))
def test_seed_independent_degrees(seed):
    assert sorted(chartab.character_table(symmetric(4), seed=seed).degrees) == [1, 1, 2, 3, 3]
