from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grchi import exact
from grchi import grassmann as gm
from grchi.mpoly import MPoly
from grchi.symfunc import GrSpec

G24 = GrSpec(2, 4)
X11, X12, X21, X22 = MPoly.variables(4)


def proportional(p: MPoly, q: MPoly) -> bool:
    keys = set(p.terms) | set(q.terms)
    ratios = {Fraction(p.terms.get(e, 0)) / q.terms[e] for e in keys if e in q.terms}
    return len(ratios) == 1 and set(p.terms) == set(q.terms) and 0 not in ratios


def test_subsets_and_signs():
    assert gm.ksubsets(G24) == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    assert gm.subset_index(G24, (2, 4)) == 4
    assert gm.laplace_sign((1, 2)) == 1
    assert gm.laplace_sign((1, 3)) == -1
    with pytest.raises(ValueError):
        gm.subset_index(G24, (1, 5))


def test_chart_minors_identity_block():
    minors = gm.chart_minors(gm.Chart(G24))
    vals = [m.evaluate([0, 0, 0, 0]) for m in minors]
    assert vals == [1, 0, 0, 0, 0, 0]
    # lex order: p12, p13, p14, p23, p24, p34
    assert minors[0] == MPoly.const(4, 1)
    assert minors[1] == X21
    assert minors[2] == X22
    assert minors[3] == -X11
    assert minors[4] == -X12
    assert minors[5] == X11 * X22 - X12 * X21


def test_pluecker_chart_hyperplanes():
    f = lambda I: gm.chart_polynomial(gm.Hyperplane.pluecker(G24, I))
    assert f((1, 4)) == X22
    assert f((2, 3)) == -X11
    assert f((3, 4)) == X11 * X22 - X12 * X21
    with pytest.raises(ValueError):
        f((1, 2))


def test_schubert_form_of_identity_is_pivot():
    Q = [[0, 0, 1, 0], [0, 0, 0, 1]]
    h = gm.schubert_form(Q, 2)
    piv = gm.Hyperplane.pluecker(G24, (1, 2))
    nz = [i for i, c in enumerate(h.coeffs) if c]
    assert nz == [0] and piv.coeffs[0] != 0


def test_schubert_chart_example():
    h = gm.schubert_form([[0, 1, 0, 1], [1, 1, 0, 1]], 2)
    assert proportional(gm.chart_polynomial(h), X11 - (X11 * X22 - X12 * X21))


def test_schubert_regression_polynomial():
    h = gm.schubert_form([[14, 7, -4, -8], [-6, 7, 2, 7]], 2)
    want = 140 * X11 * X22 - 50 * X11 - 140 * X12 * X21 + 4 * X12 - 105 * X21 + 42 * X22 - 12
    assert proportional(gm.chart_polynomial(h), want)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_schubert_form_is_stacked_determinant(seed):
    rng = np.random.default_rng(seed)
    for k, n in ((2, 4), (2, 5), (3, 6), (1, 3)):
        P = rng.integers(-5, 6, size=(k, n)).tolist()
        Q = rng.integers(-5, 6, size=(n - k, n)).tolist()
        if exact.rank(P) < k or exact.rank(Q) < n - k:
            continue
        h = gm.schubert_form(Q, k)
        p = gm.pluecker_from_matrix(P)
        val = sum(Fraction(c) * x for c, x in zip(h.coeffs, p.coords))
        assert val == exact.det(P + Q)


@pytest.mark.parametrize("k,n,count", [(2, 4, 1), (2, 5, 5), (1, 4, 0), (1, 6, 0), (2, 6, 15)])
def test_relation_counts(k, n, count):
    assert len(gm.pluecker_relations(GrSpec(k, n))) == count


def test_gr24_relation_is_three_term():
    (q,) = gm.pluecker_relations(G24)
    p = MPoly.variables(6)
    want = p[0] * p[5] - p[1] * p[4] + p[2] * p[3]
    assert q == want or q == -want


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_relations_vanish_on_random_points(seed):
    rng = np.random.default_rng(seed)
    for k, n in ((2, 4), (2, 5), (3, 6)):
        P = rng.integers(-7, 8, size=(k, n)).tolist()
        if exact.rank(P) < k:
            continue
        v = gm.pluecker_from_matrix(P)
        for q in gm.pluecker_relations(GrSpec(k, n)):
            assert q.evaluate(list(v.coords)) == 0


def test_relations_rank_in_degree_two():
    # the quadrics should be linearly independent
    rels = gm.pluecker_relations(GrSpec(2, 5))
    monos = sorted({e for q in rels for e in q.terms})
    M = [[q.terms.get(e, 0) for e in monos] for q in rels]
    assert exact.rank(M) == len(rels)


def test_pluecker_from_matrix_errors():
    with pytest.raises(ValueError):
        gm.pluecker_from_matrix([[1, 2, 3, 4], [2, 4, 6, 8]])
    with pytest.raises(ValueError):
        gm.pluecker_from_matrix([[1, 2, 3, 4], [1, 2]])


def test_chart_numeric_matrix_minors_agree():
    rng = np.random.default_rng(3)
    ch = gm.Chart(GrSpec(2, 5))
    minors = gm.chart_minors(ch)
    for _ in range(5):
        x = rng.normal(size=ch.nvars)
        M = ch.numeric_matrix(x)
        v = gm.pluecker_from_matrix(M.tolist()).coords
        assert np.allclose([float(m.evaluate(x)) for m in minors], np.real(v))


def test_pivot_transform_properties():
    rng = np.random.default_rng(8)
    for _ in range(5):
        Q = rng.integers(-6, 7, size=(2, 4)).tolist()
        if exact.rank(Q) < 2:
            continue
        for balanced in (True, False):
            A = gm.pivot_transform(Q, balanced=balanced)
            assert exact.det(A) != 0
            # last rows span the row space of Q
            assert exact.rank(A[2:] + exact.to_fractions(Q)) == 2
            # the Schubert hyperplane of Q becomes the pivot hyperplane p12
            h = gm.transform_hyperplane(gm.schubert_form(Q, 2), A)
            assert [i for i, c in enumerate(h.coeffs) if c] == [0]
        Af = np.array(gm.pivot_transform(Q), dtype=float)
        assert np.allclose(Af @ Af.T, np.eye(4), atol=1e-5)


def test_transform_is_a_coordinate_change():
    # new coordinates are P' = P A^-1; h'(P') / h(P) is one constant for every P
    rng = np.random.default_rng(11)
    A = gm.pivot_transform([[1, 2, 0, -1], [0, 3, 1, 1]])
    A_inv = exact.inverse(A)
    for _ in range(3):
        h = gm.Hyperplane.general(G24, rng.integers(-5, 6, size=6).tolist())
        h2 = gm.transform_hyperplane(h, A)
        ratios = set()
        for _ in range(6):
            P = rng.integers(-5, 6, size=(2, 4)).tolist()
            if exact.rank(P) < 2:
                continue
            a = sum(Fraction(c) * x for c, x in zip(h.coeffs, gm.pluecker_from_matrix(P).coords))
            b = sum(Fraction(c) * x for c, x in zip(h2.coeffs, gm.pluecker_from_matrix(exact.matmul(P, A_inv)).coords))
            if a:
                ratios.add(b / a)
        assert len(ratios) == 1


def test_arrangement_round_trip(tmp_path):
    arr = gm.load_arrangement(gm_fixture("cube_lines.json"))
    path = tmp_path / "a.json"
    gm.save_arrangement(arr, path)
    back = gm.load_arrangement(path)
    assert back.to_dict() == arr.to_dict()
    assert arr.all_schubert and arr.d == 4
    polys = arr.pivot_aligned().chart_polynomials()
    assert len(polys) == 3


def test_arrangement_errors():
    with pytest.raises(ValueError):
        gm.Arrangement(G24, []).pivot_aligned()
    h = gm.Hyperplane.general(G24, [1, 0, 0, 0, 0, 1])
    with pytest.raises(ValueError):
        gm.Arrangement(G24, [h]).pivot_aligned()
    with pytest.raises(ValueError):
        gm.arrangement_from_dict({"k": 2, "n": 4, "hyperplanes": [{"kind": "general", "coeffs": [1, 2]}]})


def gm_fixture(name):
    from grchi.poset import fixture_path
    return fixture_path(name)
