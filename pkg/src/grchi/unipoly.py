"""Exact univariate polynomials with integer or rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence


class UniPoly:
    """Polynomial ``sum(coeffs[i] * t**i)``; trailing zeros are stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = list(coeffs)
        for c in cs:
            if not isinstance(c, (int, Fraction)):
                raise TypeError(f"UniPoly coefficients must be exact, got {type(c).__name__}")
        cs = [int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in cs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @classmethod
    def t(cls) -> "UniPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        n = max(len(self), len(other))
        return UniPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, UniPoly) else -other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def divmod_linear(self, root) -> tuple["UniPoly", object]:
        """Synthetic division by ``(t - root)``; returns (quotient, remainder)."""
        if not self.coeffs:
            return UniPoly(), 0
        q = [0] * (len(self.coeffs) - 1)
        acc = 0
        for i in range(len(self.coeffs) - 1, -1, -1):
            acc = acc * root + self.coeffs[i]
            if i > 0:
                q[i - 1] = acc
        return UniPoly(q), acc

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if i == 0 else f"{c}*t" if i == 1 else f"{c}*t^{i}")
        return " + ".join(terms).replace("+ -", "- ")


def binomial_poly(i: int) -> UniPoly:
    """C(d, i) as a polynomial in d with rational coefficients."""
    p = UniPoly([1])
    for j in range(i):
        p = p * UniPoly([-j, 1])
    return p * Fraction(1, factorial(i))
