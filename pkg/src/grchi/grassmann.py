"""Pluecker coordinates, Schubert hyperplanes, Pluecker relations and affine charts.

Conventions
-----------
* Pluecker coordinates are indexed by sorted k-subsets of {1..n} (1-based) in
  lexicographic order.
* For a k x n matrix P and an (n-k) x n matrix Q, Laplace expansion along the
  first k rows gives

      det [P; Q] = sum_I eps(I) det P[:, I] det Q[:, I^c],
      eps(I) = (-1)^(sum(I) - k(k+1)/2),

  so the Schubert hyperplane of Q has coefficient eps(I) det Q[:, I^c] on p_I.
* A chart with pivot I0 sets the columns I0 of P to the identity; the other
  columns hold the variables x_{i,j} (row i, j-th non-pivot column), numbered
  row-major.  The default pivot {1..k} gives the matrix [I_k | X].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np

from . import exact
from .mpoly import MPoly, det as mdet
from .symfunc import GrSpec


@lru_cache(maxsize=None)
def ksubsets(spec: GrSpec) -> tuple:
    return tuple(combinations(range(1, spec.n + 1), spec.k))


def subset_index(spec: GrSpec, subset: Sequence[int]) -> int:
    s = tuple(sorted(subset))
    try:
        return ksubsets(spec).index(s)
    except ValueError:
        raise ValueError(f"{subset} is not a {spec.k}-subset of 1..{spec.n}") from None


def subset_label(subset: Sequence[int]) -> str:
    sep = "," if max(subset) >= 10 else ""
    return "p" + sep.join(str(i) for i in subset)


def laplace_sign(subset: Sequence[int]) -> int:
    k = len(subset)
    return -1 if (sum(subset) - k * (k + 1) // 2) % 2 else 1


def _complement(subset, n):
    return tuple(j for j in range(1, n + 1) if j not in subset)


def _is_exact_matrix(rows) -> bool:
    return all(isinstance(x, (int, Fraction)) for r in rows for x in r)


def _minor(rows, cols):
    sub = [[r[c - 1] for c in cols] for r in rows]
    if _is_exact_matrix(sub):
        return exact.det(sub)
    return complex(np.linalg.det(np.asarray(sub, dtype=complex)))


# -- Pluecker vectors ---------------------------------------------------------

@dataclass(frozen=True)
class PlueckerVector:
    spec: GrSpec
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.spec.euler:
            raise ValueError(f"{self.spec} needs {self.spec.euler} coordinates, got {len(self.coords)}")
        if all(c == 0 for c in self.coords):
            raise ValueError("Pluecker vector is zero")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coords)

    def __getitem__(self, subset):
        return self.coords[subset_index(self.spec, subset)]

    def to_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coords])


def pluecker_from_matrix(P: Sequence[Sequence]) -> PlueckerVector:
    """All maximal minors of a full-rank k x n matrix, lex order."""
    k, n = len(P), len(P[0])
    spec = GrSpec(k, n)
    rows = [list(r) for r in P]
    if any(len(r) != n for r in rows):
        raise ValueError("ragged matrix")
    coords = tuple(_minor(rows, I) for I in ksubsets(spec))
    if _is_exact_matrix(rows):
        if all(c == 0 for c in coords):
            raise ValueError(f"matrix has rank < {k}")
    else:
        scale = max(np.abs(np.asarray(rows, dtype=complex)).max(), 1.0) ** k
        if max(abs(c) for c in coords) <= 1e-12 * scale:
            raise ValueError(f"matrix has numerical rank < {k}")
    return PlueckerVector(spec, coords)


# -- hyperplanes --------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """A linear form on Pluecker space; ``Q`` is kept for Schubert hyperplanes."""

    spec: GrSpec
    coeffs: tuple
    kind: str = "general"
    Q: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("general", "schubert"):
            raise ValueError(f"unknown hyperplane kind {self.kind!r}")
        if len(self.coeffs) != self.spec.euler:
            raise ValueError(f"{self.spec} needs {self.spec.euler} coefficients, got {len(self.coeffs)}")
        if all(c == 0 for c in self.coeffs):
            raise ValueError("hyperplane coefficients are all zero")

    @classmethod
    def general(cls, spec: GrSpec, coeffs: Sequence) -> "Hyperplane":
        return cls(spec, tuple(coeffs), "general")

    @classmethod
    def pluecker(cls, spec: GrSpec, subset: Sequence[int]) -> "Hyperplane":
        """The coordinate hyperplane p_I = 0 (itself a Schubert hyperplane)."""
        idx = subset_index(spec, subset)
        comp = _complement(tuple(sorted(subset)), spec.n)
        # Q spanned by the unit vectors of the complement: det Q[:, comp] = 1
        Q = tuple(tuple(int(c == j) for c in range(1, spec.n + 1)) for j in comp)
        coeffs = [0] * spec.euler
        coeffs[idx] = 1
        return cls(spec, tuple(coeffs), "schubert", Q)

    def __call__(self, p: PlueckerVector | Sequence):
        coords = p.coords if isinstance(p, PlueckerVector) else p
        return sum(c * x for c, x in zip(self.coeffs, coords))

    def to_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs])

    def to_dict(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) and x.denominator != 1 else (int(x) if isinstance(x, Fraction) else x)
        if self.kind == "schubert" and self.Q is not None:
            return {"type": "schubert", "Q": [[enc(x) for x in r] for r in self.Q]}
        return {"type": "general", "coeffs": [enc(x) for x in self.coeffs]}


def schubert_form(Q: Sequence[Sequence], k: int | None = None) -> Hyperplane:
    """Linear form p |-> det [P; Q] for an (n-k) x n matrix Q of full row rank."""
    rows = [list(r) for r in Q]
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise ValueError("ragged matrix")
    kk = n - len(rows)
    if k is not None and k != kk:
        raise ValueError(f"Q has {len(rows)} rows; Gr({k},{n}) needs {n - k}")
    spec = GrSpec(kk, n)
    exact_mode = _is_exact_matrix(rows)
    if exact_mode:
        rows = exact.to_fractions(rows)
        if exact.rank(rows) != len(rows):
            raise ValueError("Q is rank deficient")
    elif np.linalg.matrix_rank(np.asarray(rows, dtype=complex)) != len(rows):
        raise ValueError("Q is rank deficient")
    coeffs = tuple(laplace_sign(I) * _minor(rows, _complement(I, n)) for I in ksubsets(spec))
    if exact_mode:
        coeffs = tuple(int(c) if c.denominator == 1 else c for c in coeffs)
    return Hyperplane(spec, coeffs, "schubert", tuple(tuple(r) for r in rows))


# -- Pluecker relations -------------------------------------------------------

def _signed_index(spec: GrSpec, seq: Sequence[int]):
    """(sign, index) for the coordinate p_seq with unsorted seq; sign 0 on repeats."""
    if len(set(seq)) < len(seq):
        return 0, None
    s = list(seq)
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
    return sign, subset_index(spec, s)


@lru_cache(maxsize=None)
def pluecker_relations(spec: GrSpec) -> tuple:
    """An independent set of quadrics spanning the degree-2 part of the Pluecker ideal.

    Built from the general exchange relations
    sum_l (-1)^l p_{I + j_l} p_{J - j_l} = 0  (|I| = k-1, |J| = k+1),
    then pruned to a linearly independent subset by exact rank.
    """
    k, n, N = spec.k, spec.n, spec.euler
    cands = []
    for I in combinations(range(1, n + 1), k - 1):
        for J in combinations(range(1, n + 1), k + 1):
            terms: dict = {}
            for l, j in enumerate(J):
                s1, a = _signed_index(spec, I + (j,))
                rest = J[:l] + J[l + 1:]
                s2, b = _signed_index(spec, rest)
                if not s1 or not s2:
                    continue
                e = [0] * N
                e[a] += 1
                e[b] += 1
                e = tuple(e)
                terms[e] = terms.get(e, 0) + (-1) ** l * s1 * s2
            q = MPoly(N, terms)
            if not q.is_zero():
                cands.append(q)
    monos = sorted({e for q in cands for e in q.terms})
    chosen, rows, r = [], [], 0
    for q in cands:
        trial = rows + [[q.coefficient(e) for e in monos]]
        rr = exact.rank(trial)
        if rr > r:
            chosen.append(q)
            rows, r = trial, rr
    return tuple(chosen)


def pluecker_codim(spec: GrSpec) -> int:
    return spec.euler - 1 - spec.m


# -- charts -------------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    spec: GrSpec
    pivot: tuple = ()

    def __post_init__(self):
        piv = tuple(sorted(self.pivot)) if self.pivot else tuple(range(1, self.spec.k + 1))
        subset_index(self.spec, piv)
        object.__setattr__(self, "pivot", piv)

    @property
    def nvars(self) -> int:
        return self.spec.m

    @property
    def free_columns(self) -> tuple:
        return _complement(self.pivot, self.spec.n)

    def var_index(self, i: int, j: int) -> int:
        """Index of x_{i,j} (1-based row i, 1-based free column position j)."""
        w = self.spec.n - self.spec.k
        if not (1 <= i <= self.spec.k and 1 <= j <= w):
            raise ValueError(f"x_{i}{j} out of range")
        return (i - 1) * w + (j - 1)

    def var_names(self) -> list[str]:
        w = self.spec.n - self.spec.k
        return [f"x{i}{j}" for i in range(1, self.spec.k + 1) for j in range(1, w + 1)]

    def matrix(self) -> list[list[MPoly]]:
        k, n, nv = self.spec.k, self.spec.n, self.nvars
        out = [[MPoly(nv) for _ in range(n)] for _ in range(k)]
        for r, c in enumerate(self.pivot):
            out[r][c - 1] = MPoly.const(nv, 1)
        for jpos, c in enumerate(self.free_columns, start=1):
            for i in range(1, k + 1):
                out[i - 1][c - 1] = MPoly.var(nv, self.var_index(i, jpos))
        return out

    def numeric_matrix(self, x: Sequence) -> np.ndarray:
        k, n = self.spec.k, self.spec.n
        x = np.asarray(x)
        M = np.zeros((k, n), dtype=x.dtype if x.dtype.kind in "fc" else float)
        for r, c in enumerate(self.pivot):
            M[r, c - 1] = 1
        for jpos, c in enumerate(self.free_columns, start=1):
            for i in range(1, k + 1):
                M[i - 1, c - 1] = x[self.var_index(i, jpos)]
        return M


@lru_cache(maxsize=None)
def chart_minors(chart: Chart) -> tuple:
    """Pluecker coordinates of the chart matrix as polynomials in the chart variables."""
    mat = chart.matrix()
    return tuple(mdet([[row[c - 1] for c in I] for row in mat]) for I in ksubsets(chart.spec))


def chart_polynomial(h: Hyperplane, chart: Chart | None = None) -> MPoly:
    chart = chart or Chart(h.spec)
    if h.spec != chart.spec:
        raise ValueError(f"hyperplane lives in {h.spec}, chart in {chart.spec}")
    out = MPoly(chart.nvars)
    for c, minor in zip(h.coeffs, chart_minors(chart)):
        if c:
            out = out + minor * c
    if out.total_degree() <= 0:
        raise ValueError("hyperplane contains chart locus or equals pivot hyperplane")
    return out


# -- coordinate change so that a given Schubert hyperplane becomes p_{1..k} ----

def _orthogonalize(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Rational Gram-Schmidt, then each row scaled to roughly unit length."""
    out: list[list[Fraction]] = []
    for r in rows:
        v = list(r)
        for u in out:
            uu = sum(x * x for x in u)
            c = sum(x * y for x, y in zip(v, u)) / uu
            v = [x - c * y for x, y in zip(v, u)]
        out.append(v)
    scaled = []
    for v in out:
        norm = float(sum(x * x for x in v)) ** 0.5
        scaled.append([x * Fraction(1 / norm).limit_denominator(10**6) for x in v])
    return scaled


def pivot_transform(Q: Sequence[Sequence], balanced: bool = True) -> list[list[Fraction]]:
    """An invertible A whose last n-k rows span the row space of Q.

    The first k rows complete A.  With ``balanced`` both blocks are
    (approximately) orthonormal rational bases, so A is close to orthogonal and
    the resulting chart is well scaled; otherwise identity rows and Q itself.
    """
    rows = exact.to_fractions(Q)
    n = len(rows[0])
    k = n - len(rows)
    _, pivots = exact.row_reduce(rows)
    if len(pivots) != len(rows):
        raise ValueError("Q is rank deficient")
    if balanced:
        comp = exact.nullspace(rows, n)  # orthogonal complement of the row space
        A = _orthogonalize(comp) + _orthogonalize(rows)
    else:
        extra = [c for c in range(n) if c not in pivots][:k]
        A = [[Fraction(int(j == c)) for j in range(n)] for c in extra] + rows
    if exact.det(A) == 0:
        raise ValueError("could not complete Q to an invertible matrix")
    return A


def transform_hyperplane(h: Hyperplane, A: Sequence[Sequence], A_inv: Sequence[Sequence] | None = None) -> Hyperplane:
    """The hyperplane in coordinates P' = P A^{-1}, same zero locus on Gr.

    Schubert: Q' = Q A^{-1}.  General: l'_J = sum_I l_I det A[J, I] (Cauchy-Binet).
    """
    spec = h.spec
    if h.kind == "schubert" and h.Q is not None:
        A_inv = A_inv if A_inv is not None else exact.inverse(A)
        return schubert_form(exact.matmul(h.Q, A_inv), spec.k)
    subs = ksubsets(spec)
    Af = exact.to_fractions(A)
    coeffs = []
    for J in subs:
        acc = Fraction(0)
        for I, l in zip(subs, h.coeffs):
            if l:
                acc += Fraction(l) * exact.det([[Af[j - 1][i - 1] for i in I] for j in J])
        coeffs.append(int(acc) if acc.denominator == 1 else acc)
    return Hyperplane.general(spec, coeffs)


# -- arrangements -------------------------------------------------------------

@dataclass
class Arrangement:
    spec: GrSpec
    hyperplanes: list = field(default_factory=list)
    name: str = ""

    def __len__(self):
        return len(self.hyperplanes)

    @property
    def d(self) -> int:
        return len(self.hyperplanes)

    @property
    def all_schubert(self) -> bool:
        return all(h.kind == "schubert" for h in self.hyperplanes)

    def pivot_aligned(self) -> "Arrangement":
        """Change coordinates so the first hyperplane is p_{1..k}; requires it to be Schubert."""
        if not self.hyperplanes:
            raise ValueError("empty arrangement")
        h0 = self.hyperplanes[0]
        if h0.kind != "schubert" or h0.Q is None:
            raise ValueError("the first hyperplane must be a Schubert hyperplane to serve as the chart pivot")
        A = pivot_transform(h0.Q)
        A_inv = exact.inverse(A)
        new = [transform_hyperplane(h, A, A_inv) for h in self.hyperplanes]
        return Arrangement(self.spec, new, self.name)

    def chart_polynomials(self, chart: Chart | None = None) -> list[MPoly]:
        """Chart polynomials of hyperplanes 2..d; hyperplane 1 must be the chart's pivot form."""
        chart = chart or Chart(self.spec)
        piv = Hyperplane.pluecker(self.spec, chart.pivot)
        h0 = self.hyperplanes[0]
        ratio = _proportional(h0.coeffs, piv.coeffs)
        if ratio is None:
            raise ValueError("first hyperplane is not the chart pivot; call pivot_aligned() first")
        return [chart_polynomial(h, chart) for h in self.hyperplanes[1:]]

    def to_dict(self) -> dict:
        out = {"k": self.spec.k, "n": self.spec.n, "hyperplanes": [h.to_dict() for h in self.hyperplanes]}
        if self.name:
            out["name"] = self.name
        return out


def _proportional(a, b):
    nz = [(x, y) for x, y in zip(a, b) if y != 0]
    if not nz or any(x != 0 and y == 0 for x, y in zip(a, b)):
        return None
    r = Fraction(nz[0][0]) / Fraction(nz[0][1])
    if r == 0 or any(Fraction(x) != r * Fraction(y) for x, y in nz):
        return None
    return r


def _parse_scalar(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12) if x == x else x
    return x


def arrangement_from_dict(data: dict) -> Arrangement:
    try:
        spec = GrSpec(int(data["k"]), int(data["n"]))
        hs = data["hyperplanes"]
    except KeyError as exc:
        raise ValueError(f"arrangement file is missing field {exc}") from None
    out = []
    for i, h in enumerate(hs, start=1):
        kind = h.get("type")
        if kind == "schubert":
            Q = [[_parse_scalar(x) for x in r] for r in h["Q"]]
            if len(Q) != spec.n - spec.k:
                raise ValueError(f"hyperplane {i}: Q needs {spec.n - spec.k} rows")
            out.append(schubert_form(Q, spec.k))
        elif kind == "general":
            out.append(Hyperplane.general(spec, [_parse_scalar(x) for x in h["coeffs"]]))
        elif kind == "pluecker":
            out.append(Hyperplane.pluecker(spec, h["subset"]))
        else:
            raise ValueError(f"hyperplane {i}: unknown type {kind!r}")
    return Arrangement(spec, out, data.get("name", ""))


def load_arrangement(path: str | Path) -> Arrangement:
    with open(path) as fh:
        return arrangement_from_dict(json.load(fh))


def save_arrangement(arr: Arrangement, path: str | Path):
    with open(path, "w") as fh:
        json.dump(arr.to_dict(), fh, indent=1)
