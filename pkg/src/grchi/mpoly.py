"""Sparse multivariate polynomials over exact rationals or complex floats.

A polynomial is a map from exponent tuples to coefficients.  Exact mode uses
``int``/``Fraction`` coefficients; float mode uses ``complex`` (or ``float``).
The two modes never mix implicitly: use :meth:`MPoly.to_complex` or
:meth:`MPoly.to_float` to convert.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


class MPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
                if c != 0:
                    clean[tuple(e)] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): coeff})

    @classmethod
    def variables(cls, nvars: int) -> list["MPoly"]:
        return [cls.var(nvars, i) for i in range(nvars)]

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "MPoly":
        n = len(coeffs)
        p = cls.const(n, const)
        for i, c in enumerate(coeffs):
            if c != 0:
                p.terms[tuple(int(j == i) for j in range(n))] = c
        return p

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.terms.values())

    def coefficient(self, exponent: Sequence[int]):
        return self.terms.get(tuple(exponent), 0)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def homogeneous_part(self, deg: int) -> "MPoly":
        return MPoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == deg})

    def coeff_norm(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "MPoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, Number):
            return MPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Number):
            other = MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus ---------------------------------------------------------
    def diff(self, i: int) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MPoly(self.nvars, out)

    def gradient(self) -> list["MPoly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def hessian(self) -> list[list["MPoly"]]:
        g = self.gradient()
        return [[gi.diff(j) for j in range(self.nvars)] for gi in g]

    # -- evaluation -------------------------------------------------------
    def evaluate(self, x: Sequence):
        """Evaluate at ``x``; exact inputs give exact output, floats use fsum."""
        if len(x) != self.nvars:
            raise ValueError(f"point has dimension {len(x)}, expected {self.nvars}")
        vals = []
        for e, c in self.terms.items():
            v = c
            for xi, k in zip(x, e):
                if k:
                    v = v * xi**k
            vals.append(v)
        if not vals:
            return 0
        if all(_is_exact(v) for v in vals):
            return sum(vals, Fraction(0)) if any(isinstance(v, Fraction) for v in vals) else sum(vals)
        if any(isinstance(v, complex) for v in vals):
            re = math.fsum(complex(v).real for v in vals)
            im = math.fsum(complex(v).imag for v in vals)
            return complex(re, im)
        return math.fsum(float(v) for v in vals)

    __call__ = evaluate

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """Compose: replace variable i by ``images[i]`` (all sharing one ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0].nvars if images else 0
        out = MPoly(target)
        cache: dict = {}
        for e, c in self.terms.items():
            term = MPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def homogenize(self, degree: int | None = None) -> "MPoly":
        """Append a homogenizing variable as the LAST coordinate."""
        d = self.total_degree() if degree is None else degree
        return MPoly(self.nvars + 1, {e + (d - sum(e),): c for e, c in self.terms.items()})

    # -- conversion -------------------------------------------------------
    def to_complex(self) -> "MPoly":
        return MPoly(self.nvars, {e: complex(c) for e, c in self.terms.items()})

    def to_float(self) -> "MPoly":
        return MPoly(self.nvars, {e: float(c) for e, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)


class PolySystem:
    """A list of polynomials over a common set of variables."""

    def __init__(self, polys: Iterable[MPoly]):
        self.polys = list(polys)
        if not self.polys:
            raise ValueError("empty polynomial system")
        n = self.polys[0].nvars
        if any(p.nvars != n for p in self.polys):
            raise ValueError("inconsistent variable counts in system")
        self.nvars = n
        self._jac = None

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def is_square(self) -> bool:
        return len(self.polys) == self.nvars

    def degrees(self) -> list[int]:
        return [p.total_degree() for p in self.polys]

    @property
    def jacobian(self) -> list[list[MPoly]]:
        if self._jac is None:
            self._jac = [p.gradient() for p in self.polys]
        return self._jac

    def evaluate(self, x: Sequence) -> list:
        return [p.evaluate(x) for p in self.polys]

    def evaluate_jacobian(self, x: Sequence) -> list[list]:
        return [[d.evaluate(x) for d in row] for row in self.jacobian]


def evaluate(p: MPoly, x: Sequence):
    return p.evaluate(x)


def gradient(p: MPoly) -> list[MPoly]:
    return p.gradient()


def det(matrix: Sequence[Sequence[MPoly]]) -> MPoly:
    """Determinant of a small square matrix of polynomials (Laplace along row 0)."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    nv = matrix[0][0].nvars
    out = MPoly(nv)
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * det(minor)
        out = out + term if j % 2 == 0 else out - term
    return out
