"""Scattering equations on Gr(k,n) minus a hyperplane arrangement and their solution counts.

Two formulations:

* chart: the first hyperplane is a Schubert hyperplane moved to p_{1..k} = 0
  by a change of coordinates; on the affine chart the potential is
  L = sum_{i>=2} s_i log f_i(x).
* cone: Pluecker coordinates on the affine slice l_1 = 1 with Lagrange
  multipliers for codim-many random combinations of the Pluecker quadrics.

Both are solved in auxiliary-variable form (multipliers mu_i = s_i / f_i),
which keeps the total degree low and has no solutions where some f_i = 0.
"""

from __future__ import annotations

import enum
import logging
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import grassmann as gm
from .charpoly import (ChiUnknownError, chi_sections_generic, chi_sections_schubert,
                       generic_count)
from .mpoly import MPoly, PolySystem
from .solve import SolutionSet, SolveConfig, solve_total_degree
from .symfunc import GrSpec

log = logging.getLogger(__name__)

WEIGHT_BOUND = 10**4


class Formulation(str, enum.Enum):
    CHART = "chart"
    CONE = "cone"


def sample_weights(count: int, seed: int) -> list[int]:
    """Nonzero integers in [-10^4, 10^4] from a seeded stream."""
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0x5CA7])
    out = []
    while len(out) < count:
        w = int(rng.integers(-WEIGHT_BOUND, WEIGHT_BOUND + 1))
        if w:
            out.append(w)
    return out


@dataclass
class ScatteringData:
    arrangement: gm.Arrangement
    weights: list
    formulation: Formulation = Formulation.CHART

    def __post_init__(self):
        self.formulation = Formulation(self.formulation)
        if self.arrangement.d < 1:
            raise ValueError("arrangement needs at least one hyperplane")
        if len(self.weights) != self.arrangement.d - 1:
            raise ValueError(f"need {self.arrangement.d - 1} weights (one per non-slice hyperplane), got {len(self.weights)}")
        if any(w == 0 for w in self.weights):
            raise ValueError("weights must be nonzero")
        if self.formulation == Formulation.CHART and self.arrangement.hyperplanes[0].kind != "schubert":
            raise ValueError("chart formulation needs a Schubert hyperplane first (the chart pivot)")

    @property
    def spec(self) -> GrSpec:
        return self.arrangement.spec


def _normalize(p: MPoly) -> MPoly:
    """Scale by the largest coefficient (exactly) so solver coefficients are O(1)."""
    big = max(abs(Fraction(c)) for c in p.terms.values())
    return p * (1 / big)


def _float_weights(weights) -> list[float]:
    top = max(abs(w) for w in weights)
    return [w / top for w in weights]


# -- chart formulation --------------------------------------------------------

def chart_functions(data: ScatteringData, chart: gm.Chart | None = None) -> list[MPoly]:
    arr = data.arrangement
    chart = chart or gm.Chart(arr.spec)
    piv = gm.Hyperplane.pluecker(arr.spec, chart.pivot)
    if gm._proportional(arr.hyperplanes[0].coeffs, piv.coeffs) is None:
        arr = arr.pivot_aligned()
    return arr.chart_polynomials(chart)


def critical_system_chart(data: ScatteringData, chart: gm.Chart | None = None) -> tuple[PolySystem, list[MPoly]]:
    """Cleared-denominator critical equations and the side conditions f_i != 0.

    For each variable x_l: sum_i s_i (df_i/dx_l) prod_{j != i} f_j.
    """
    fs = chart_functions(data, chart)
    nv = fs[0].nvars
    eqs = []
    for l in range(nv):
        acc = MPoly(nv)
        for i, (s, f) in enumerate(zip(data.weights, fs)):
            term = f.diff(l) * s
            for j, g in enumerate(fs):
                if j != i:
                    term = term * g
            acc = acc + term
        eqs.append(acc)
    return PolySystem(eqs), fs


def aux_system_chart(data: ScatteringData, chart: gm.Chart | None = None) -> tuple[PolySystem, list[MPoly]]:
    """Unknowns (x, lam); equations lam_i f_i - s_i and sum_i lam_i grad f_i."""
    fs = [_normalize(f) for f in chart_functions(data, chart)]
    return _aux_system(fs, _float_weights(data.weights)), fs


def _aux_system(fs: Sequence[MPoly], s: Sequence[float]) -> PolySystem:
    m, r = fs[0].nvars, len(fs)
    N = m + r
    xs = [_embed(f, N) for f in fs]
    lam = [MPoly.var(N, m + i) for i in range(r)]
    eqs = [lam[i] * xs[i] - s[i] for i in range(r)]
    for l in range(m):
        acc = MPoly(N)
        for i in range(r):
            acc = acc + lam[i] * xs[i].diff(l)
        eqs.append(acc)
    return PolySystem(eqs)


def _embed(p: MPoly, N: int) -> MPoly:
    pad = N - p.nvars
    return MPoly(N, {e + (0,) * pad: c for e, c in p.terms.items()})


# -- cone formulation ---------------------------------------------------------

def _random_quadric_combos(spec: GrSpec, seed: int) -> list[MPoly]:
    rels = gm.pluecker_relations(spec)
    c = gm.pluecker_codim(spec)
    if c == 0:
        return []
    if len(rels) == c:
        return list(rels)
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0xC0DE])
    out = []
    for _ in range(c):
        w = rng.integers(-9, 10, size=len(rels))
        acc = MPoly(spec.euler)
        for wi, q in zip(w, rels):
            if wi:
                acc = acc + q * int(wi)
        out.append(acc)
    return out


def critical_system_cone(data: ScatteringData, seed: int = 0) -> tuple[PolySystem, dict]:
    """Lagrange system on the slice l_1 = 1 of the affine cone over Gr.

    Unknowns: p (C(n,k)), mu_2..mu_d, lambda_1..lambda_c, lambda_0.
    Equations: l_1(p) = 1, q_c(p) = 0, mu_i l_i(p) = s_i,
               sum_i mu_i a_i - sum_c lambda_c grad q_c - lambda_0 a_1 = 0.
    """
    spec = data.spec
    N = spec.euler
    hs = data.arrangement.hyperplanes
    qs = _random_quadric_combos(spec, seed)
    r, c = len(hs) - 1, len(qs)
    V = N + r + c + 1
    p = MPoly.variables(V)
    mu = p[N:N + r]
    lam = p[N + r:N + r + c]
    lam0 = p[V - 1]
    a = [[Fraction(x) for x in h.coeffs] for h in hs]
    top = [max(abs(x) for x in ai) for ai in a]
    a = [[x / t for x in ai] for ai, t in zip(a, top)]
    ell = [MPoly.linear(ai + [0] * (V - N)) for ai in a]
    s = _float_weights(data.weights)
    qV = [_embed(q, V) for q in qs]
    # the slice is a_1 . p = 1 for the normalized a_1; l_1 itself is only rescaled
    eqs = [ell[0] - 1]
    eqs += qV
    eqs += [mu[i] * ell[i + 1] - s[i] for i in range(r)]
    for j in range(N):
        acc = MPoly(V)
        for i in range(r):
            if a[i + 1][j]:
                acc = acc + mu[i] * a[i + 1][j]
        for cc in range(c):
            acc = acc - lam[cc] * qV[cc].diff(j)
        if a[0][j]:
            acc = acc - lam0 * a[0][j]
        eqs.append(acc)
    return PolySystem(eqs), {"nvars_pluecker": N, "quadrics": gm.pluecker_relations(spec)}


# -- counting -----------------------------------------------------------------

@dataclass
class CountRun:
    seed: int
    count: int
    solutions: SolutionSet
    weights: list

    @property
    def clean(self) -> bool:
        return self.solutions.paths_failed == 0 and self.solutions.path_crossings == 0


def _admissible_cone(sols: SolutionSet, quadrics, N: int, tol: float = 1e-8) -> int:
    cnt = 0
    for pt in sols.nonsingular:
        p = pt.coords[:N]
        scale = max(1.0, float(np.abs(p).max())) ** 2
        if all(abs(complex(q.to_complex().evaluate(p))) <= tol * scale * max(1.0, q.coeff_norm()) for q in quadrics):
            cnt += 1
    return cnt


def count_once(arr: gm.Arrangement, formulation: Formulation, cfg: SolveConfig,
               weights: list | None = None) -> CountRun:
    weights = weights if weights is not None else sample_weights(arr.d - 1, cfg.seed)
    data = ScatteringData(arr, weights, formulation)
    if data.formulation == Formulation.CHART:
        F, _ = aux_system_chart(data)
        sols = solve_total_degree(F, cfg)
        count = len(sols.nonsingular)
    else:
        F, meta = critical_system_cone(data, cfg.seed)
        sols = solve_total_degree(F, cfg)
        count = _admissible_cone(sols, meta["quadrics"], meta["nvars_pluecker"])
    return CountRun(cfg.seed, count, sols, weights)


@dataclass
class MLDegreeReport:
    count: int
    bezout: int
    paths_failed: int
    seed: int
    weights: list
    formulation: str
    prediction: int | None
    consistent: bool
    identified: bool
    runs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "bezout": self.bezout,
            "paths_failed": self.paths_failed,
            "seed": self.seed,
            "weights": self.weights,
            "formulation": self.formulation,
            "prediction": self.prediction,
            "consistent": self.consistent,
            "identified_with_chi": self.identified,
            "runs": [{"seed": r.seed, "count": r.count, **r.solutions.summary()} for r in self.runs],
        }


class NondeterministicCount(RuntimeError):
    pass


def default_formulation(arr: gm.Arrangement) -> Formulation:
    return Formulation.CHART if arr.hyperplanes and arr.hyperplanes[0].kind == "schubert" else Formulation.CONE


def predict(arr: gm.Arrangement, kind: str | None = None) -> int | None:
    """|chi| predicted symbolically for a generic arrangement of the given kind, if known."""
    kind = kind or ("schubert" if arr.all_schubert else "general")
    spec = arr.spec
    try:
        if kind == "schubert":
            chis = chi_sections_schubert(spec)
        else:
            chis = chi_sections_generic(spec)
        return abs(generic_count(spec, chis, arr.d))
    except ChiUnknownError:
        return None


def ml_degree(arr: gm.Arrangement, cfg: SolveConfig | None = None, formulation: Formulation | str | None = None,
              prediction: int | None = None, confirm: bool = False, weights: list | None = None) -> MLDegreeReport:
    """Count admissible critical points; retry with a fresh seed on path failures.

    ``confirm`` always runs a second seed; differing counts between clean runs
    raise NondeterministicCount.
    """
    cfg = cfg or SolveConfig()
    form = Formulation(formulation) if formulation else default_formulation(arr)
    identified = arr.d >= arr.spec.m
    if not identified:
        warnings.warn(f"d = {arr.d} < dim = {arr.spec.m}: the count is not identified with |chi|", stacklevel=2)
    runs = [count_once(arr, form, cfg, weights)]
    if confirm or not runs[0].clean:
        runs.append(count_once(arr, form, cfg.with_seed(cfg.seed + 0x9E3779B9), weights))
        a, b = runs
        if a.count != b.count:
            if a.clean and b.clean or confirm:
                raise NondeterministicCount(f"nondeterministic count: seed {a.seed} gives {a.count}, seed {b.seed} gives {b.count}")
    use = next((r for r in reversed(runs) if r.clean), runs[-1])
    consistent = prediction is None or use.count == abs(prediction)
    return MLDegreeReport(use.count, use.solutions.bezout, use.solutions.paths_failed, use.seed, use.weights,
                          form.value, prediction, consistent and use.clean, identified, runs)


# -- arrangement builders -----------------------------------------------------

def _rand_int_matrix(rng, rows, cols, bound=10):
    return [[int(x) for x in rng.integers(-bound, bound + 1, size=cols)] for _ in range(rows)]


def random_schubert_arrangement(spec: GrSpec, d: int, seed: int) -> gm.Arrangement:
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0x5C4B])
    hs = []
    while len(hs) < d:
        try:
            hs.append(gm.schubert_form(_rand_int_matrix(rng, spec.n - spec.k, spec.n), spec.k))
        except ValueError:
            continue
    return gm.Arrangement(spec, hs, f"random Schubert d={d} seed={seed}")


def random_general_arrangement(spec: GrSpec, d: int, seed: int) -> gm.Arrangement:
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0x6E4E])
    hs = [gm.Hyperplane.general(spec, [int(x) for x in rng.integers(-10, 11, size=spec.euler)]) for _ in range(d)]
    return gm.Arrangement(spec, hs, f"random general d={d} seed={seed}")


def cycle_arrangement(d: int, seed: int = 0) -> gm.Arrangement:
    """d lines in P^3 forming a cycle: L_i = span(v_i, v_{i+1}), indices mod d."""
    if d < 3:
        raise ValueError("a cycle needs at least 3 lines")
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0xC7C1])
    spec = GrSpec(2, 4)
    vs = _rand_int_matrix(rng, d, 4)
    hs = [gm.schubert_form([vs[i], vs[(i + 1) % d]], 2) for i in range(d)]
    return gm.Arrangement(spec, hs, f"cycle of {d} lines")


def pluecker_arrangement(spec: GrSpec = GrSpec(2, 4)) -> gm.Arrangement:
    hs = [gm.Hyperplane.pluecker(spec, I) for I in gm.ksubsets(spec)]
    return gm.Arrangement(spec, hs, "coordinate hyperplanes")


EXTRA_LINE = [[1, 2, 3, 5], [2, -1, 7, 1]]


def six_plus_one_arrangement() -> gm.Arrangement:
    """The six Pluecker hyperplanes plus the Schubert divisor of a line meeting none of their lines."""
    arr = pluecker_arrangement()
    arr.hyperplanes.append(gm.schubert_form(EXTRA_LINE, 2))
    arr.name = "coordinate hyperplanes plus one"
    return arr
