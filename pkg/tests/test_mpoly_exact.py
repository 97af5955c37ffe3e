from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grchi import exact
from grchi.mpoly import MPoly, PolySystem, det as mdet
from grchi.unipoly import UniPoly, binomial_poly

small_int = st.integers(-5, 5)


@st.composite
def polys(draw, nvars=3, max_terms=5, max_exp=3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(nvars))
        terms[e] = draw(small_int)
    return MPoly(nvars, terms)


def test_evaluate_examples():
    x1, x2, x3 = MPoly.variables(3)
    assert (x1 * x2 - x3).evaluate([2, 3, 6]) == 0
    x11, x12, x21, x22 = MPoly.variables(4)
    f2 = x11 - (x11 * x22 - x12 * x21)
    assert f2.evaluate([0, 0, 0, 0]) == 0


def test_diff_examples():
    (x,) = MPoly.variables(1)
    assert (x * x).diff(0) == x * 2
    x11, x12, x21, x22 = MPoly.variables(4)
    g = (x11 * x22 - x12 * x21).gradient()
    assert g == [x22, -x21, -x12, x11]


@given(polys(), polys(), st.lists(small_int, min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_evaluation_is_a_ring_map(p, q, x):
    assert (p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x)
    assert (p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x)


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_leibniz(p, q):
    for i in range(3):
        assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    x, y, z = MPoly.variables(3)
    p = x**3 * y - 2 * y * z**2 + x * z + 7
    grad = p.gradient()
    h = 1e-7
    for _ in range(20):
        pt = rng.uniform(-1, 1, 3)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            fd = (float(p.evaluate(pt + e)) - float(p.evaluate(pt - e))) / (2 * h)
            an = float(grad[i].evaluate(pt))
            assert abs(fd - an) <= 1e-6 * max(1.0, abs(an))


def test_homogenize_and_degree():
    x, y = MPoly.variables(2)
    p = x * x + y - 3
    h = p.homogenize()
    assert h.nvars == 3
    assert all(sum(e) == 2 for e in h.terms)
    assert h.evaluate([2, 5, 1]) == p.evaluate([2, 5])
    assert p.total_degree() == 2 and p.degree_in(1) == 1


def test_substitute_composes():
    x, y = MPoly.variables(2)
    p = x * y + x
    q = p.substitute([y + 1, x * x])
    assert q == (y + 1) * x * x + y + 1


def test_symbolic_det_matches_numeric():
    x, y = MPoly.variables(2)
    M = [[x, y], [y * 2, x + 1]]
    d = mdet(M)
    assert d == x * (x + 1) - y * y * 2


def test_polysystem_square_and_degrees():
    x, y = MPoly.variables(2)
    S = PolySystem([x * x - 1, x * y * y])
    assert S.is_square()
    assert S.degrees() == [2, 3]


@given(st.integers(1, 5), st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_exact_linear_algebra_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(-6, 7, size=(n, n)).tolist()
    d = exact.det(A)
    assert abs(float(d) - np.linalg.det(np.array(A, float))) <= 1e-6 * max(1.0, abs(float(d)))
    if d != 0:
        inv = exact.inverse(A)
        prod = exact.matmul(A, inv)
        assert prod == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        b = rng.integers(-6, 7, size=n).tolist()
        x = exact.solve(A, b)
        assert [sum(a * xi for a, xi in zip(row, x)) for row in A] == b
    assert exact.rank(A) == np.linalg.matrix_rank(np.array(A, float))


def test_nullspace_annihilates():
    A = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1]]
    ns = exact.nullspace(A, 4)
    assert len(ns) == 4 - exact.rank(A) == 2
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in A)


def test_solve_singular_raises():
    with pytest.raises(ValueError):
        exact.solve([[1, 2], [2, 4]], [1, 2])


def test_unipoly_basics():
    t = UniPoly.t()
    p = (t + 1) * (t + 1)
    assert p.coeffs == [1, 2, 1]
    assert p.degree == 2
    assert UniPoly([1, 0, 0]).coeffs == [1]
    with pytest.raises(TypeError):
        UniPoly([1.5])
    q, r = p.divmod_linear(-1)
    assert q.coeffs == [1, 1] and r == 0


def test_binomial_poly_values():
    for i in range(5):
        b = binomial_poly(i)
        for d in range(8):
            from math import comb
            assert b(d) == comb(d, i)
