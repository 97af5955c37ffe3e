"""Regions of R^n minus real hypersurfaces V(f_1), ..., V(f_d) via Morse theory.

With g a positive definite quadric and 2*ell > sum(deg f_i), the function

    m(x) = -log |f_1 ... f_d / g^ell|

tends to +infinity at every hypersurface and at infinity, so each region of
the complement contains local minima of m and its Euler characteristic is the
alternating count of critical points inside it.  Regions are recovered by
following the descending flow of m out of every saddle.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import Radau
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from . import grassmann as gm
from .mpoly import MPoly, PolySystem
from .solve import CompiledSystem, SolveConfig, solve_total_degree

log = logging.getLogger(__name__)


class NotMorseError(RuntimeError):
    pass


class FlowError(RuntimeError):
    pass


class IncompleteCriticalSet(RuntimeError):
    pass


def _real(p: MPoly) -> MPoly:
    return MPoly(p.nvars, {e: float(c) for e, c in p.terms.items()})


@dataclass
class MorseFunction:
    fs: list
    A: np.ndarray
    center: np.ndarray
    ell: int
    seed: int
    g: MPoly = field(init=False)

    def __post_init__(self):
        n = self.nvars
        xs = MPoly.variables(n)
        g = MPoly.const(n, 1.0)
        for i in range(n):
            for j in range(n):
                if self.A[i, j]:
                    g = g + (xs[i] - float(self.center[i])) * (xs[j] - float(self.center[j])) * float(self.A[i, j])
        self.g = g
        self._F = CompiledSystem(self.fs)
        self._H = [CompiledSystem(f.gradient()) if f.total_degree() > 1 else None for f in self.fs]

    @property
    def nvars(self) -> int:
        return self.fs[0].nvars

    def g_value(self, x):
        d = x - self.center
        return float(d @ self.A @ d) + 1.0

    def values(self, x: np.ndarray) -> np.ndarray:
        return self._F.F(np.asarray(x, dtype=float)[None])[0].real

    def signs(self, x) -> tuple:
        return tuple(int(np.sign(v)) for v in self.values(x))

    def m(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(-np.log(np.abs(self.values(x))).sum() + self.ell * np.log(self.g_value(x)))

    def grad(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        F, J = self._F.FJ(x[None])
        F, J = F[0].real, J[0].real
        gv = self.g_value(x)
        dg = 2 * self.A @ (x - self.center)
        return -(J / F[:, None]).sum(axis=0) + self.ell * dg / gv

    def hess(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        n = self.nvars
        F, J = self._F.FJ(x[None])
        F, J = F[0].real, J[0].real
        H = np.zeros((n, n))
        for i, hc in enumerate(self._H):
            Hi = hc.FJ(x[None])[1][0].real if hc is not None else np.zeros((n, n))
            H -= Hi / F[i] - np.outer(J[i], J[i]) / F[i] ** 2
        gv = self.g_value(x)
        dg = 2 * self.A @ (x - self.center)
        H += self.ell * (2 * self.A / gv - np.outer(dg, dg) / gv**2)
        return H


def build_morse(fs: Sequence[MPoly], seed: int = 0) -> MorseFunction:
    """g = (x-a)^T A (x-a) + 1 with A = B^T B + I, B and a uniform in [-1, 1]."""
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one polynomial")
    n = fs[0].nvars
    for f in fs:
        if f.is_zero() or f.total_degree() < 1:
            raise ValueError("polynomials must be nonconstant")
        if f.nvars != n:
            raise ValueError("polynomials live in different numbers of variables")
        if any(isinstance(c, complex) for c in f.terms.values()):
            raise ValueError("polynomials must have real coefficients")
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0x6D6F])
    B = rng.uniform(-1, 1, size=(n, n))
    A = B.T @ B + np.eye(n)
    a = rng.uniform(-1, 1, size=n)
    total = sum(f.total_degree() for f in fs)
    ell = total // 2 + 1
    # positive rescaling of each f_i changes m by a constant only
    normed = [_real(f) * (1.0 / max(abs(float(c)) for c in f.terms.values())) for f in fs]
    return MorseFunction(normed, A, a, ell, seed)


@dataclass
class MorseCriticalPoint:
    coords: np.ndarray
    index: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    value: float
    signs: tuple
    region_id: int | None = None

    def unstable_directions(self) -> np.ndarray:
        return self.eigenvectors[:, self.eigenvalues < 0]


def critical_system(mf: MorseFunction) -> PolySystem:
    """Unknowns (x, lam, mu): lam_i f_i = 1, mu g = ell, sum_i lam_i grad f_i = mu grad g."""
    n, r = mf.nvars, len(mf.fs)
    N = n + r + 1
    pad = lambda p: MPoly(N, {e + (0,) * (N - n): c for e, c in p.terms.items()})
    fs = [pad(f) for f in mf.fs]
    g = pad(mf.g)
    v = MPoly.variables(N)
    lam, mu = v[n:n + r], v[N - 1]
    eqs = [lam[i] * fs[i] - 1.0 for i in range(r)]
    eqs.append(mu * g - float(mf.ell))
    for l in range(n):
        acc = mu * g.diff(l) * -1.0
        for i in range(r):
            acc = acc + lam[i] * fs[i].diff(l)
        eqs.append(acc)
    return PolySystem(eqs)


def cleared_gradient_system(mf: MorseFunction) -> PolySystem:
    """For each l: sum_i df_i/dx_l * g * prod_{j!=i} f_j - ell * dg/dx_l * prod_j f_j."""
    n = mf.nvars
    prod_all = MPoly.const(n, 1.0)
    for f in mf.fs:
        prod_all = prod_all * f
    eqs = []
    for l in range(n):
        acc = prod_all * mf.g.diff(l) * (-float(mf.ell))
        for i, f in enumerate(mf.fs):
            term = f.diff(l) * mf.g
            for j, h in enumerate(mf.fs):
                if j != i:
                    term = term * h
            acc = acc + term
        eqs.append(acc)
    return PolySystem(eqs)


def _polish(mf: MorseFunction, x: np.ndarray, iters: int = 20) -> np.ndarray | None:
    for _ in range(iters):
        gr = mf.grad(x)
        if not np.all(np.isfinite(gr)):
            return None
        try:
            dx = np.linalg.solve(mf.hess(x), -gr)
        except np.linalg.LinAlgError:
            return None
        x = x + dx
        if np.linalg.norm(dx) <= 1e-15 * (1 + np.linalg.norm(x)):
            break
    return x


@dataclass
class CriticalSet:
    points: list
    solve_summary: dict
    seed: int


def morse_critical_points(mf: MorseFunction, cfg: SolveConfig | None = None,
                          degenerate_tol: float = 1e-12) -> CriticalSet:
    cfg = cfg or SolveConfig(seed=mf.seed)
    n = mf.nvars
    sols = solve_total_degree(critical_system(mf), cfg)
    if sols.paths_failed:
        raise IncompleteCriticalSet(f"{sols.paths_failed} paths failed; critical set may be incomplete")
    cands = [p.coords[:n] for p in sols.nonsingular if np.abs(p.coords.imag).max() < 1e-6]
    pts: list[MorseCriticalPoint] = []
    for c in cands:
        x = _polish(mf, c.real.copy())
        if x is None:
            continue
        vals = mf.values(x)
        if np.any(np.abs(vals) < 1e-10):
            continue
        gnorm = np.linalg.norm(mf.grad(x))
        if gnorm > 1e-10 * (1 + np.abs(mf.hess(x)).max() * (1 + np.linalg.norm(x))):
            raise IncompleteCriticalSet(f"critical point did not polish: |grad m| = {gnorm:.2e}")
        if any(np.linalg.norm(x - q.coords) <= cfg.dedup_radius * (1 + np.linalg.norm(x)) for q in pts):
            continue
        H = mf.hess(x)
        w, V = np.linalg.eigh(H)
        # Jacobi scaling is a congruence, so it keeps the inertia but removes anisotropy
        dsc = 1.0 / np.sqrt(np.maximum(np.abs(np.diag(H)), 1e-300))
        ws = np.linalg.eigvalsh(H * dsc[:, None] * dsc[None, :])
        if np.abs(ws).min() <= degenerate_tol * np.abs(ws).max() or (ws < 0).sum() != (w < 0).sum():
            raise NotMorseError("not Morse; reseed g")
        pts.append(MorseCriticalPoint(x, int((w < 0).sum()), w, V, mf.m(x), mf.signs(x)))
    pts.sort(key=lambda p: (p.index, p.value, tuple(np.round(p.coords, 9))))
    return CriticalSet(pts, sols.summary(), cfg.seed)


def euler_from_morse(points: Sequence[MorseCriticalPoint]) -> int:
    return sum((-1) ** p.index for p in points)


# -- region connectivity ------------------------------------------------------

def _flow(mf: MorseFunction, start: np.ndarray, origin: int, tree: cKDTree, pts: list,
          capture: float, max_len: float = 1e4, max_step: float = np.inf,
          max_flow_steps: int = 20000) -> int:
    """Follow -grad m / sqrt(1 + |grad m|^2) from ``start``; return the index of the point reached."""
    signs0 = mf.signs(start)

    def field_(_, y):
        gr = mf.grad(y)
        return -gr / np.sqrt(1.0 + gr @ gr)

    def jac(_, y):
        gr, H = mf.grad(y), mf.hess(y)
        s = np.sqrt(1.0 + gr @ gr)
        return -H / s + np.outer(gr, gr @ H) / s**3

    # far-out saddles pair slow unstable directions with very stiff stable ones,
    # so an implicit Runge-Kutta scheme (Radau IIA) is used
    solver = Radau(field_, 0.0, start, max_len, max_step=max_step, rtol=1e-8, atol=1e-11, jac=jac)
    last = start.copy()
    steps = 0
    while solver.status == "running":
        solver.step()
        steps += 1
        if steps > max_flow_steps:
            raise FlowError("flow exceeded the step budget")
        y = solver.y
        if not np.all(np.isfinite(y)) or np.linalg.norm(y) > 1e8:
            raise FlowError("flow escaped")
        if mf.signs(y) != signs0:
            # stepped across a hypersurface: restart from the last good point with shorter steps
            h = np.linalg.norm(y - last)
            return _flow(mf, last, origin, tree, pts, capture, max_len - solver.t, max(h / 4, 1e-12))
        last = y.copy()
        hits = tree.query_ball_point(y, capture * (1 + np.linalg.norm(y)))
        hits = [h for h in hits if h != origin or pts[h].index == 0]
        if hits:
            return min(hits, key=lambda h: np.linalg.norm(pts[h].coords - y))
        gr = mf.grad(y)
        away = np.linalg.norm(y - pts[origin].coords) > 100 * capture * (1 + np.linalg.norm(y))
        if away and np.linalg.norm(gr) < 1e-6:
            z = _polish(mf, y.copy())
            if z is not None:
                d, j = tree.query(z)
                if d <= capture * (1 + np.linalg.norm(z)):
                    return int(j)
                raise IncompleteCriticalSet(f"flow reached an unlisted critical point near {np.round(z, 6)}")
    raise FlowError("flow exceeded the maximum integration length")


@dataclass
class Region:
    id: int
    sign_pattern: str
    chi: int
    critical_point_ids: list

    def to_dict(self) -> dict:
        return {"id": self.id, "sign_pattern": self.sign_pattern, "chi": self.chi,
                "n_critical_points": len(self.critical_point_ids)}


@dataclass
class RegionReport:
    regions: list
    total_chi: int
    region_count: int
    seed: int
    morse_counts: dict
    points: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "region_count": self.region_count,
            "total_chi": self.total_chi,
            "regions": [r.to_dict() for r in self.regions],
            "seed": self.seed,
            "morse_counts": {str(k): v for k, v in sorted(self.morse_counts.items())},
            "notes": self.notes,
        }

    def pattern_multiset(self) -> Counter:
        return Counter(r.sign_pattern for r in self.regions)

    def chi_multiset(self) -> Counter:
        return Counter(r.chi for r in self.regions)

    def signature(self) -> tuple:
        """Seed-independent summary: sorted (pattern, chi) pairs."""
        return tuple(sorted((r.sign_pattern, r.chi) for r in self.regions))


def pattern_string(signs: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def _flow_from(mf, p, i, v, tree, pts, capture, max_len) -> int:
    eps = 1e-6 * (1 + np.linalg.norm(p.coords))
    err = None
    for _ in range(6):
        try:
            j = _flow(mf, p.coords + eps * v, i, tree, pts, capture, max_len)
        except FlowError as exc:
            err = exc
            eps *= 0.1
            continue
        if j != i:
            return j
        eps *= 0.5  # flow returned to the start
    raise FlowError(f"flow from critical point {i} failed: {err or 'keeps returning to its start'}")


def connect_regions(points: Sequence[MorseCriticalPoint], mf: MorseFunction,
                    cfg: SolveConfig | None = None) -> RegionReport:
    cfg = cfg or SolveConfig(seed=mf.seed)
    pts = list(points)
    if not pts:
        raise IncompleteCriticalSet("no critical points")
    coords = np.array([p.coords for p in pts])
    tree = cKDTree(coords)
    capture = 10 * cfg.dedup_radius
    edges = []
    for i, p in enumerate(pts):
        if p.index == 0:
            continue
        U = p.unstable_directions()
        dirs = [U[:, 0], -U[:, 0]] if p.index == 1 else [U[:, 0]]
        # escaping a saddle takes time ~ log(1/eps) / |lambda|
        lam = abs(p.eigenvalues[0])
        max_len = 1e4 + 200.0 / lam
        for v in dirs:
            j = _flow_from(mf, p, i, v, tree, pts, capture, max_len)
            edges.append((i, j))
    n = len(pts)
    if edges:
        a, b = zip(*edges)
        adj = coo_matrix((np.ones(len(edges)), (a, b)), shape=(n, n))
    else:
        adj = coo_matrix((n, n))
    ncomp, labels = connected_components(adj, directed=False)
    regions = []
    for r in range(ncomp):
        members = [i for i in range(n) if labels[i] == r]
        minima = [i for i in members if pts[i].index == 0]
        if not minima:
            raise IncompleteCriticalSet(f"region {r} has no local minimum")
        pats = {pts[i].signs for i in members}
        if len(pats) != 1:
            raise RuntimeError(f"connectivity bug: region {r} mixes sign patterns {sorted(pats)}")
        for i in members:
            pts[i].region_id = r
        regions.append(Region(r, pattern_string(pts[minima[0]].signs),
                              sum((-1) ** pts[i].index for i in members), members))
    regions.sort(key=lambda R: (R.sign_pattern, R.chi, len(R.critical_point_ids)))
    counts = Counter(p.index for p in pts)
    return RegionReport(regions, euler_from_morse(pts), len(regions), mf.seed, dict(counts), pts)


def regions_of(fs: Sequence[MPoly], seed: int = 0, cfg: SolveConfig | None = None,
               attempts: int = 3) -> RegionReport:
    """Full pipeline with reseeding of g on non-Morse or incomplete runs."""
    cfg = cfg or SolveConfig(seed=seed)
    errors = []
    for a in range(attempts + 1):
        s = seed + a * 7919
        mf = build_morse(fs, s)
        try:
            crit = morse_critical_points(mf, cfg.with_seed(s))
            rep = connect_regions(crit.points, mf, cfg.with_seed(s))
        except (NotMorseError, IncompleteCriticalSet, FlowError) as exc:
            errors.append(f"seed {s}: {exc}")
            log.info("morse attempt failed: %s", exc)
            continue
        summary = {k: v for k, v in crit.solve_summary.items() if k != "elapsed_s"}
        rep.notes = errors + [f"critical solve: {summary}"]
        rep.seed = seed
        return rep
    raise IncompleteCriticalSet("incomplete critical set after reseeding: " + "; ".join(errors))


def arrangement_functions(arr: gm.Arrangement) -> list[MPoly]:
    """Chart polynomials f_2..f_d, first aligning hyperplane 1 with the chart pivot."""
    chart = gm.Chart(arr.spec)
    piv = gm.Hyperplane.pluecker(arr.spec, chart.pivot)
    if gm._proportional(arr.hyperplanes[0].coeffs, piv.coeffs) is None:
        arr = arr.pivot_aligned()
    return arr.chart_polynomials(chart)


def arrangement_regions(arr: gm.Arrangement, seed: int = 0, cfg: SolveConfig | None = None) -> RegionReport:
    return regions_of(arrangement_functions(arr), seed, cfg)


def sample_schubert_arrangement(d: int, seed: int) -> gm.Arrangement:
    """p12 plus d-1 Schubert hyperplanes from 2x4 matrices with standard Gaussian entries."""
    from fractions import Fraction
    from .symfunc import GrSpec
    spec = GrSpec(2, 4)
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0x5A4D])
    hs = [gm.Hyperplane.pluecker(spec, (1, 2))]
    while len(hs) < d:
        Q = [[Fraction(float(v)) for v in row] for row in rng.standard_normal((2, 4))]
        try:
            hs.append(gm.schubert_form(Q, 2))
        except ValueError:
            continue
    return gm.Arrangement(spec, hs, f"Gaussian Schubert sample d={d} seed={seed}")
