"""Schubert calculus in H*(Gr(k, n)) via symmetric polynomials in k variables.

Classes are stored in the Schur basis sigma_lambda, lambda inside the
k x (n-k) box.  Products are computed by lifting to Schur polynomials
s_lambda(x_1..x_k), multiplying, and re-expanding with the alternant:
the coefficient of s_lambda in p equals the coefficient of x^(lambda+delta)
in p * prod_{i<j}(x_i - x_j).

Partitions with a first part larger than n-k are dropped as soon as they
appear.  This is valid because s_lambda with lambda_1 > n-k lies in the ideal
(h_{n-k+1}, ..., h_n) by Jacobi-Trudi; ``tests/test_symfunc.py`` guards the
truncation with the quotient-ring soundness property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

from .mpoly import MPoly, det
from .unipoly import UniPoly

MAX_DIM = 16


@dataclass(frozen=True)
class GrSpec:
    k: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.k, int) and isinstance(self.n, int)) or not 0 < self.k < self.n:
            raise ValueError(f"need 0 < k < n, got k={self.k}, n={self.n}")

    @property
    def m(self) -> int:
        return self.k * (self.n - self.k)

    @property
    def box(self) -> "Partition":
        return Partition([self.n - self.k] * self.k)

    @property
    def euler(self) -> int:
        return comb(self.n, self.k)

    def dual(self) -> "GrSpec":
        return GrSpec(self.n - self.k, self.n)

    def __str__(self):
        return f"Gr({self.k},{self.n})"


def _check_range(spec: GrSpec):
    if spec.m > MAX_DIM:
        raise ValueError(
            f"{spec} has dimension {spec.m} > {MAX_DIM}; alternant expansion is not supported that far"
        )


class Partition(tuple):
    """Weakly decreasing tuple of positive parts (zeros stripped)."""

    def __new__(cls, parts=()):
        ps = [int(p) for p in parts]
        if any(p < 0 for p in ps):
            raise ValueError(f"negative part in {ps}")
        if any(a < b for a, b in zip(ps, ps[1:])):
            raise ValueError(f"parts not weakly decreasing: {ps}")
        while ps and ps[-1] == 0:
            ps.pop()
        return super().__new__(cls, ps)

    @property
    def parts(self) -> tuple:
        return tuple(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def fits(self, spec: GrSpec) -> bool:
        return len(self) <= spec.k and (not self or self[0] <= spec.n - spec.k)

    def __repr__(self):
        return f"({','.join(map(str, self))})"


@dataclass(frozen=True)
class SchurClass:
    spec: GrSpec
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for lam, c in self.terms.items():
            lam = lam if isinstance(lam, Partition) else Partition(lam)
            if not lam.fits(self.spec):
                raise ValueError(f"partition {lam} does not fit in the box of {self.spec}")
            if c:
                clean[lam] = clean.get(lam, 0) + c
        object.__setattr__(self, "terms", {l: c for l, c in clean.items() if c})

    @classmethod
    def sigma(cls, spec: GrSpec, parts=(), coeff: int = 1) -> "SchurClass":
        return cls(spec, {Partition(parts): coeff})

    @classmethod
    def one(cls, spec: GrSpec) -> "SchurClass":
        return cls.sigma(spec)

    def graded(self, deg: int) -> "SchurClass":
        return SchurClass(self.spec, {l: c for l, c in self.terms.items() if l.weight == deg})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SchurClass") -> "SchurClass":
        _same(self, other)
        out = dict(self.terms)
        for l, c in other.terms.items():
            out[l] = out.get(l, 0) + c
        return SchurClass(self.spec, out)

    def __mul__(self, other):
        if isinstance(other, int):
            return SchurClass(self.spec, {l: c * other for l, c in self.terms.items()})
        return mult(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, dict):
            return self.terms == {Partition(k): v for k, v in other.items() if v}
        if not isinstance(other, SchurClass):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"0 in H*({self.spec})"
        body = " + ".join(f"{c}*s{l!r}" for l, c in sorted(self.terms.items()))
        return body


def _same(a: SchurClass, b: SchurClass):
    if a.spec != b.spec:
        raise ValueError(f"classes live in different Grassmannians: {a.spec} vs {b.spec}")


# -- symmetric polynomial helpers ---------------------------------------------

@lru_cache(maxsize=None)
def complete_h(j: int, k: int) -> MPoly:
    """Complete homogeneous symmetric polynomial h_j(x_1..x_k)."""
    if j < 0:
        return MPoly(k)
    terms = {}
    for combo in combinations_with_replacement(range(k), j):
        e = [0] * k
        for i in combo:
            e[i] += 1
        terms[tuple(e)] = 1
    return MPoly(k, terms)


@lru_cache(maxsize=None)
def elementary_e(j: int, k: int) -> MPoly:
    if j < 0 or j > k:
        return MPoly(k)
    from itertools import combinations
    terms = {}
    for combo in combinations(range(k), j):
        terms[tuple(int(i in combo) for i in range(k))] = 1
    return MPoly(k, terms)


@lru_cache(maxsize=None)
def vandermonde(k: int) -> MPoly:
    xs = MPoly.variables(k)
    out = MPoly.const(k, 1)
    for i in range(k):
        for j in range(i + 1, k):
            out = out * (xs[i] - xs[j])
    return out


@lru_cache(maxsize=None)
def schur_poly(lam: Partition, k: int) -> MPoly:
    """s_lambda(x_1..x_k) by the Jacobi-Trudi determinant."""
    lam = Partition(lam)
    if len(lam) > k:
        return MPoly(k)
    if not lam:
        return MPoly.const(k, 1)
    l = len(lam)
    mat = [[complete_h(lam[i] - i + j, k) for j in range(l)] for i in range(l)]
    return det(mat)


def is_symmetric(p: MPoly) -> bool:
    k = p.nvars
    for i in range(k - 1):
        swapped = {}
        for e, c in p.terms.items():
            e2 = list(e)
            e2[i], e2[i + 1] = e2[i + 1], e2[i]
            swapped[tuple(e2)] = c
        if swapped != p.terms:
            return False
    return True


def schur_expand(p: MPoly, spec: GrSpec) -> SchurClass:
    """Expand a symmetric polynomial in k variables in the Schur basis of H*(Gr)."""
    if p.nvars != spec.k:
        raise ValueError(f"polynomial has {p.nvars} variables, {spec} needs {spec.k}")
    if not is_symmetric(p):
        raise ValueError("not symmetric")
    k = spec.k
    delta = tuple(range(k - 1, -1, -1))
    width = spec.n - spec.k
    prod = p * vandermonde(k)
    out = {}
    for e, c in prod.terms.items():
        if any(a <= b for a, b in zip(e, e[1:])):
            continue
        lam = tuple(a - d for a, d in zip(e, delta))
        if lam[0] > width:
            continue  # in the ideal; see module docstring
        out[Partition(lam)] = out.get(Partition(lam), 0) + c
    return SchurClass(spec, out)


def lift(c: SchurClass) -> MPoly:
    out = MPoly(c.spec.k)
    for lam, coef in c.terms.items():
        out = out + schur_poly(lam, c.spec.k) * coef
    return out


def mult(a: SchurClass, b: SchurClass) -> SchurClass:
    _same(a, b)
    spec = a.spec
    m = spec.m
    out = SchurClass(spec)
    for la, ca in a.terms.items():
        for lb, cb in b.terms.items():
            if la.weight + lb.weight > m:
                continue
            out = out + _product_basis(la, lb, spec) * (ca * cb)
    return out


@lru_cache(maxsize=4096)
def _product_basis(la: Partition, lb: Partition, spec: GrSpec) -> SchurClass:
    return schur_expand(schur_poly(la, spec.k) * schur_poly(lb, spec.k), spec)


def integrate(c: SchurClass) -> int:
    """Degree of the zero-cycle part: the coefficient of sigma_box."""
    return c.terms.get(c.spec.box, 0)


def integrate_poly(p: MPoly, spec: GrSpec) -> int:
    """integrate(schur_expand(p)) without expanding the lower-degree terms."""
    k = spec.k
    target = tuple(spec.n - spec.k + d for d in range(k - 1, -1, -1))
    top = p.homogeneous_part(spec.m)
    return (top * vandermonde(k)).coefficient(target)


@lru_cache(maxsize=None)
def _chern_poly(spec: GrSpec) -> tuple:
    """Graded pieces (c_0..c_m) of c(T Gr) as symmetric polynomials."""
    _check_range(spec)
    k, w = spec.k, spec.n - spec.k
    xs = MPoly.variables(k)
    total = MPoly.const(k, 1)
    for i in range(k):
        # prod_j (1 + x_i + y_j) = sum_j e_j(y) (1+x_i)^(w-j), with e_j(y) = h_j(x)
        base = xs[i] + 1
        factor = MPoly(k)
        for j in range(w + 1):
            factor = factor + complete_h(j, k) * base ** (w - j)
        total = _truncate(total * factor, spec.m)
    return tuple(total.homogeneous_part(j) for j in range(spec.m + 1))


def _truncate(p: MPoly, deg: int) -> MPoly:
    return MPoly(p.nvars, {e: c for e, c in p.terms.items() if sum(e) <= deg})


def chern_tangent(spec: GrSpec) -> list[SchurClass]:
    """Chern classes c_0..c_m of the tangent bundle, Schur-expanded."""
    return [schur_expand(piece, spec) for piece in _chern_poly(spec)]


def gamma_poly(spec: GrSpec) -> UniPoly:
    """sum_r (integral of sigma_1^r * c_{m-r}(T Gr)) t^r."""
    pieces = _chern_poly(spec)
    e1 = elementary_e(1, spec.k)
    coeffs = []
    power = MPoly.const(spec.k, 1)
    for r in range(spec.m + 1):
        coeffs.append(integrate_poly(power * pieces[spec.m - r], spec))
        power = power * e1
    return UniPoly(coeffs)


def degree_of_grassmannian(spec: GrSpec) -> int:
    """Classical formula m! prod_{i<k} i!/(n-k+i)!."""
    from fractions import Fraction
    from math import factorial
    val = Fraction(factorial(spec.m))
    for i in range(spec.k):
        val *= Fraction(factorial(i), factorial(spec.n - spec.k + i))
    assert val.denominator == 1
    return int(val)

