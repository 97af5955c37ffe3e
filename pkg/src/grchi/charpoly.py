"""Sectional Euler characteristics and the count polynomials built from them.

Sign convention: ``SectionalChi.values[i]`` is the (unsigned, as tabulated)
Euler characteristic chi(i) of the intersection of i hyperplanes with the
Grassmannian.  The alternating signs live only inside the formulas, e.g. the
t^i coefficient of chi_X(t) is (-1)^i chi(i).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from . import exact
from .symfunc import GrSpec, gamma_poly
from .unipoly import UniPoly, binomial_poly


class Flavor(str, enum.Enum):
    GENERIC = "generic"
    SCHUBERT = "schubert"


class Provenance(str, enum.Enum):
    SYMBOLIC = "symbolic"
    RECURSION = "recursion"
    NUMERIC = "numeric"
    USER = "user"
    UNKNOWN = "unknown"


class ChiUnknownError(ValueError):
    pass


@dataclass
class SectionalChi:
    spec: GrSpec
    values: list  # int, or None where unknown
    flavor: Flavor = Flavor.GENERIC
    provenance: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.values) != self.spec.m + 1:
            raise ValueError(f"expected {self.spec.m + 1} values for {self.spec}, got {len(self.values)}")
        if not self.provenance:
            self.provenance = [Provenance.UNKNOWN if v is None else Provenance.SYMBOLIC for v in self.values]
        if not self.notes:
            self.notes = [""] * len(self.values)
        if self.values[0] is not None and self.values[0] != self.spec.euler:
            raise ValueError(f"chi(0) must be C(n,k) = {self.spec.euler}, got {self.values[0]}")

    def missing(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v is None]

    def is_complete(self) -> bool:
        return not self.missing()

    def as_tuple(self) -> tuple:
        return tuple(self.values)


def aluffi_involution(p: UniPoly) -> UniPoly:
    """(t p(-t-1) + p(0)) / (t+1), computed exactly."""
    shifted = p.compose(UniPoly([-1, -1]))
    num = UniPoly.t() * shifted + p[0]
    q, r = num.divmod_linear(-1)
    if r != 0:
        raise ArithmeticError(f"inexact division by t+1 (remainder {r}); arithmetic bug")
    return q


def chi_polynomial(spec: GrSpec) -> UniPoly:
    """chi_X(t) for X = Gr(k,n)."""
    return aluffi_involution(gamma_poly(spec))


def chi_sections_generic(spec: GrSpec) -> SectionalChi:
    chi_t = chi_polynomial(spec)
    vals = [(-1) ** i * chi_t[i] for i in range(spec.m + 1)]
    return SectionalChi(spec, vals, Flavor.GENERIC, [Provenance.SYMBOLIC] * len(vals))


def _require_complete(chis: SectionalChi):
    miss = chis.missing()
    if miss:
        raise ChiUnknownError(f"chi values unknown at indices {miss} for {chis.spec}")


def generic_count(spec: GrSpec, chis: SectionalChi, d: int) -> int:
    """sum_i (-1)^i chi(i) C(d, i): Euler characteristic of the complement of d hyperplanes."""
    _require_complete(chis)
    if d < 0:
        raise ValueError("d must be nonnegative")
    return sum((-1) ** i * c * comb(d, i) for i, c in enumerate(chis.values))


def count_polynomial(chis: SectionalChi) -> UniPoly:
    """The same count as an expanded polynomial in d with rational coefficients."""
    _require_complete(chis)
    out = UniPoly()
    for i, c in enumerate(chis.values):
        out = out + binomial_poly(i) * ((-1) ** i * c)
    return out


# -- Schubert arrangements ----------------------------------------------------

@dataclass(frozen=True)
class ChiResult:
    value: int | None
    provenance: Provenance
    rule: str

    @property
    def known(self) -> bool:
        return self.value is not None


def _schubert_rules(spec: GrSpec, d: int):
    """All derivation rules that apply, as (rule, value) pairs, in precedence order."""
    if spec.k > spec.n - spec.k:
        spec = spec.dual()
    k, n = spec.k, spec.n
    if d > spec.m:
        yield "empty intersection", 0
        return
    if d == 0:
        yield "chi(Gr) = C(n,k)", comb(n, k)
    elif d == 1:
        yield "one divisor: C(n,k) - 1", comb(n, k) - 1
    elif d == 2:
        yield "two divisors: C(n,k) - 2", comb(n, k) - 2
    if d >= comb(n, k) - spec.m:
        yield "smooth beyond C(n,k) - k(n-k)", chi_sections_generic(spec).values[d]
    if n > d * k and n - 1 > k:
        sub = schubert_chi(GrSpec(k, n - 1), d)
        if sub.known:
            yield f"recursion n > dk via {GrSpec(k, n - 1)}", comb(n - 1, k - 1) + sub.value
    elif n > d * k and n - 1 == k:
        # Gr(k, k) is a point; only d = 0 survives
        yield "recursion n > dk via a point", comb(n - 1, k - 1) + (1 if d == 0 else 0)


def schubert_derivations(spec: GrSpec, d: int) -> list[tuple[str, int]]:
    return list(_schubert_rules(spec, d))


def schubert_chi(spec: GrSpec, d: int, overrides: Mapping[int, int] | None = None) -> ChiResult:
    """chi^S_{k,n}(d) from the fixed rule chain; overrides only fill gaps.

    Every applicable rule is evaluated; disagreement between rules or between a
    rule and an override raises ValueError with both numbers.
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    derivs = schubert_derivations(spec, d)
    if derivs:
        rule, val = derivs[0]
        for other_rule, other in derivs[1:]:
            if other != val:
                raise ValueError(f"rule conflict at {spec}, d={d}: {rule} gives {val}, {other_rule} gives {other}")
        if overrides and d in overrides and overrides[d] != val:
            raise ValueError(
                f"override chi^S({d}) = {overrides[d]} conflicts with derived value {val} ({rule}) for {spec}"
            )
        prov = Provenance.SYMBOLIC if rule.startswith("smooth") else Provenance.RECURSION
        return ChiResult(val, prov, rule)
    if overrides and d in overrides:
        return ChiResult(int(overrides[d]), Provenance.USER, "override")
    return ChiResult(None, Provenance.UNKNOWN,
                     f"no rule covers d={d} for {spec} (d < C(n,k) - k(n-k) and n <= dk)")


def chi_sections_schubert(spec: GrSpec, overrides: Mapping[int, int] | None = None,
                          override_provenance: Provenance = Provenance.USER) -> SectionalChi:
    vals, prov, notes = [], [], []
    for d in range(spec.m + 1):
        r = schubert_chi(spec, d, overrides)
        vals.append(r.value)
        prov.append(override_provenance if r.provenance == Provenance.USER else r.provenance)
        notes.append(r.rule)
    return SectionalChi(spec, vals, Flavor.SCHUBERT, prov, notes)


# -- fitting from numeric counts ----------------------------------------------

def _solve_fit(rows, rhs):
    try:
        return exact.solve(rows, rhs)
    except ValueError:
        raise ValueError("sample points do not determine the polynomial (singular system)") from None


def fit_chi_from_counts(spec: GrSpec, samples: Mapping[int, int],
                        known: SectionalChi | Mapping[int, int] | None = None,
                        flavor: Flavor = Flavor.SCHUBERT) -> SectionalChi:
    """Invert the binomial transform from ML-degree samples {d: count}.

    Counts are |chi| of the complement; for a smooth very affine variety of
    dimension m the sign is (-1)^m.  With ``known`` entries supplied only the
    remaining unknowns are solved for, and each extra sample is a consistency check.
    """
    m = spec.m
    fixed: dict[int, int] = {}
    if isinstance(known, SectionalChi):
        fixed = {i: v for i, v in enumerate(known.values) if v is not None}
    elif known:
        fixed = dict(known)
    unknown = [i for i in range(m + 1) if i not in fixed]
    pts = sorted(samples)
    if len(set(pts)) < len(unknown):
        raise ValueError(f"need at least {len(unknown)} samples at distinct d, got {len(pts)}")
    sign = (-1) ** m

    def residual_rhs(d):
        base = sum((-1) ** i * v * comb(d, i) for i, v in fixed.items())
        return Fraction(sign * samples[d] - base)

    use, extra = pts[:len(unknown)], pts[len(unknown):]
    rows = [[Fraction((-1) ** i * comb(d, i)) for i in unknown] for d in use]
    sol = _solve_fit(rows, [residual_rhs(d) for d in use]) if unknown else []
    values = [None] * (m + 1)
    prov = [Provenance.USER] * (m + 1)
    for i, v in fixed.items():
        values[i] = v
    for i, v in zip(unknown, sol):
        if v.denominator != 1:
            raise ValueError("counts do not fit a degree-m binomial polynomial (non-integral chi)")
        values[i] = int(v)
        prov[i] = Provenance.NUMERIC
    for d in extra:
        pred = sum((-1) ** i * v * comb(d, i) for i, v in enumerate(values))
        if pred != sign * samples[d]:
            raise ValueError(
                f"counts do not fit a degree-m binomial polynomial: d={d} gives {samples[d]}, fit predicts {sign * pred}"
            )
    return SectionalChi(spec, values, flavor, prov)


def zaslavsky_projective(n: int, d: int) -> int:
    """Number of regions of d generic hyperplanes in RP^(n-1)."""
    if d < 1:
        raise ValueError("need at least one hyperplane")
    return sum(comb(d - 1, j) for j in range(n))
