from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from grchi.mpoly import MPoly
from grchi.symfunc import (GrSpec, Partition, SchurClass, chern_tangent, complete_h, degree_of_grassmannian,
                           elementary_e, gamma_poly, integrate, integrate_poly, is_symmetric, lift, mult,
                           schur_expand, schur_poly)

G24 = GrSpec(2, 4)


def sig(spec, *parts, c=1):
    return SchurClass.sigma(spec, parts, c)


def partitions_in_box(spec):
    out = []

    def rec(prefix, maxpart):
        if len(prefix) == spec.k:
            out.append(Partition(prefix))
            return
        for p in range(maxpart, -1, -1):
            rec(prefix + [p], p)

    rec([], spec.n - spec.k)
    return out


def test_grspec_validation():
    assert G24.m == 4 and G24.euler == 6
    assert G24.box.parts == (2, 2)
    with pytest.raises(ValueError):
        GrSpec(3, 3)
    with pytest.raises(ValueError):
        GrSpec(0, 3)


def test_schur_expand_examples():
    e1 = elementary_e(1, 2)
    assert schur_expand(e1 * e1, G24).terms == {Partition((2,)): 1, Partition((1, 1)): 1}
    assert schur_expand(MPoly.const(2, 1), G24).terms == {Partition(()): 1}
    assert schur_expand(e1 * e1 * e1 * e1, G24).terms == {Partition((2, 2)): 2}


def test_schur_expand_rejects_nonsymmetric():
    x, y = MPoly.variables(2)
    assert not is_symmetric(x * x + y)
    with pytest.raises(ValueError, match="not symmetric"):
        schur_expand(x * x + y, G24)


def test_mult_examples():
    s1 = sig(G24, 1)
    assert mult(s1, s1).terms == {Partition((2,)): 1, Partition((1, 1)): 1}
    assert mult(sig(G24, 2, 2), s1).is_zero()
    assert mult(s1, sig(G24, 2, 1)).terms == {Partition((2, 2)): 1}
    with pytest.raises(ValueError):
        mult(s1, sig(GrSpec(2, 5), 1))


def test_integrate_examples():
    assert integrate(sig(G24, 2, 2)) == 1
    assert integrate(sig(G24, 1)) == 0
    s1 = sig(G24, 1)
    assert integrate(mult(mult(s1, s1), mult(s1, s1))) == 2


def test_chern_tangent_examples():
    c = chern_tangent(G24)
    assert c[0].terms == {Partition(()): 1}
    assert c[1].terms == {Partition((1,)): 4}
    assert integrate(c[4]) == 6


@pytest.mark.parametrize("spec,coeffs", [
    (GrSpec(2, 4), [6, 12, 14, 8, 2]),
    (GrSpec(2, 5), [10, 30, 60, 75, 57, 25, 5]),
    (GrSpec(1, 2), [2, 1]),
])
def test_gamma_examples(spec, coeffs):
    assert gamma_poly(spec).coeffs == coeffs


def _classical_degree(spec):
    # m! * prod_{i<k} i! / (n-k+i)!
    from fractions import Fraction
    v = Fraction(factorial(spec.m))
    for i in range(spec.k):
        v *= Fraction(factorial(i), factorial(spec.n - spec.k + i))
    return int(v)


@pytest.mark.parametrize("k,n", [(1, 2), (1, 4), (2, 4), (2, 5), (2, 6), (3, 6), (3, 5), (1, 6)])
def test_gamma_constant_leading_and_duality(k, n):
    spec = GrSpec(k, n)
    g = gamma_poly(spec)
    assert g.degree == spec.m
    assert g[0] == comb(n, k)
    assert g[spec.m] == _classical_degree(spec) == degree_of_grassmannian(spec)
    assert g.coeffs == gamma_poly(spec.dual()).coeffs


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (3, 6), (2, 6), (1, 5)])
def test_pieri_for_every_partition(k, n):
    spec = GrSpec(k, n)
    s1 = sig(spec, 1)
    for lam in partitions_in_box(spec):
        got = mult(s1, SchurClass.sigma(spec, lam.parts)).terms
        want = {}
        for i in range(k):
            mu = list(lam.parts) + [0] * (k - len(lam.parts))
            mu[i] += 1
            if mu[i] <= n - k and (i == 0 or mu[i] <= mu[i - 1]):
                want[Partition(mu)] = 1
        assert got == want, lam


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (3, 6)])
def test_ideal_relations_vanish(k, n):
    spec = GrSpec(k, n)
    for j in range(n - k + 1, n + 1):
        assert schur_expand(complete_h(j, k), spec).is_zero()


@st.composite
def symmetric_polys(draw, spec):
    # random integer combination of products of elementary polynomials
    acc = MPoly(spec.k)
    for _ in range(draw(st.integers(1, 3))):
        term = MPoly.const(spec.k, draw(st.integers(-3, 3)))
        deg = 0
        for _ in range(draw(st.integers(0, 2))):
            j = draw(st.integers(1, spec.k))
            if deg + j > spec.m:
                break
            term = term * elementary_e(j, spec.k)
            deg += j
        acc = acc + term
    return acc


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_quotient_ring_soundness(data):
    spec = data.draw(st.sampled_from([GrSpec(2, 4), GrSpec(2, 5), GrSpec(3, 6)]))
    p = data.draw(symmetric_polys(spec))
    q = data.draw(symmetric_polys(spec))
    assert schur_expand(p * q, spec) == mult(schur_expand(p, spec), schur_expand(q, spec))


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_product_commutative_associative(data):
    spec = data.draw(st.sampled_from([GrSpec(2, 4), GrSpec(2, 5), GrSpec(3, 6)]))
    lams = partitions_in_box(spec)
    a, b, c = (SchurClass.sigma(spec, data.draw(st.sampled_from(lams)).parts) for _ in range(3))
    assert mult(a, b) == mult(b, a)
    assert mult(mult(a, b), c) == mult(a, mult(b, c))


def test_lift_round_trip():
    spec = GrSpec(2, 5)
    for lam in partitions_in_box(spec):
        c = SchurClass.sigma(spec, lam.parts)
        assert schur_expand(lift(c), spec) == c
        assert lift(c) == schur_poly(lam, spec.k)


def test_integrate_poly_degree():
    for spec in (GrSpec(2, 4), GrSpec(2, 5), GrSpec(3, 6)):
        e1 = elementary_e(1, spec.k)
        p = MPoly.const(spec.k, 1)
        for _ in range(spec.m):
            p = p * e1
        assert integrate_poly(p, spec) == _classical_degree(spec)


def test_supported_range_enforced():
    with pytest.raises(ValueError):
        gamma_poly(GrSpec(4, 9))
