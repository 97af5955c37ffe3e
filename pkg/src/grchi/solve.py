"""Total-degree homotopy continuation for square polynomial systems.

Paths are tracked in projective coordinates (homogenizing variable last) on a
random affine patch a.z = 1, along

    H(z, t) = (1 - t) * gamma * G(z) + t * F(z),   t: 0 -> 1,

with start system G_i = z_i^{d_i} - c_i z_0^{d_i}.  All paths of a chunk are
advanced together in numpy: RK4 predictor on the Davidenko equation, Newton
corrector, per-path adaptive step.  Endpoints are refined by Newton at t = 1,
dehomogenized, deduplicated and classified.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree

from .mpoly import MPoly, PolySystem

log = logging.getLogger(__name__)


@dataclass
class SolveConfig:
    seed: int = 0
    tol_track: float = 1e-7
    tol_refine: float = 1e-12
    dedup_radius: float = 1e-6
    max_halvings: int = 40
    endgame_iters: int = 50
    # internal knobs
    h_init: float = 0.02
    h_max: float = 0.1
    max_steps: int = 20000
    chunk: int = 4096
    diverge_norm: float = 1e8
    singular_cond: float = 1e10
    real_tol: float = 1e-8
    cluster_cond: float = 1e6
    end_gap: float = 1e-8  # tracking stops at t = 1 - end_gap; Newton at t = 1 finishes

    def __post_init__(self):
        if not (0 < self.tol_refine < self.tol_track):
            raise ValueError("need 0 < tol_refine < tol_track")
        if self.dedup_radius <= 0 or self.max_halvings < 1 or self.endgame_iters < 1:
            raise ValueError("dedup radius, max halvings and endgame iterations must be positive")
        self.seed = int(self.seed) & 0xFFFFFFFFFFFFFFFF

    def with_seed(self, seed: int) -> "SolveConfig":
        return SolveConfig(**{**self.__dict__, "seed": seed})


@dataclass
class Solution:
    coords: np.ndarray
    residual: float
    singular: bool
    real: bool
    cond: float
    multiplicity: int = 1

    @property
    def real_coords(self) -> np.ndarray:
        return self.coords.real.copy()


@dataclass
class SolutionSet:
    points: list
    bezout: int
    paths_failed: int
    paths_diverged: int
    paths_converged: int
    seed: int
    path_crossings: int = 0
    elapsed: float = 0.0
    stats: dict = field(default_factory=dict)

    @property
    def nonsingular(self) -> list:
        return [p for p in self.points if not p.singular]

    @property
    def singular(self) -> list:
        return [p for p in self.points if p.singular]

    def real_points(self, nonsingular_only: bool = True) -> list:
        return [p for p in self.points if p.real and (not p.singular or not nonsingular_only)]

    def summary(self) -> dict:
        return {
            "bezout": self.bezout,
            "points": len(self.points),
            "nonsingular": len(self.nonsingular),
            "singular": len(self.singular),
            "paths_converged": self.paths_converged,
            "paths_failed": self.paths_failed,
            "paths_diverged": self.paths_diverged,
            "path_crossings": self.path_crossings,
            "seed": self.seed,
            "elapsed_s": round(self.elapsed, 3),
        }


class CompiledSystem:
    """Batch evaluator of F and its Jacobian at many points (rows of X)."""

    def __init__(self, polys: Sequence[MPoly]):
        polys = list(polys)
        if not polys:
            raise ValueError("empty system")
        n = polys[0].nvars
        self.nvars, self.neq = n, len(polys)
        cols: dict = {}

        def col(e):
            if e not in cols:
                cols[e] = len(cols)
            return cols[e]

        fr, fc, fd = [], [], []
        jr, jc, jd = [], [], []
        for i, p in enumerate(polys):
            for e, c in p.terms.items():
                fr.append(i)
                fc.append(col(e))
                fd.append(complex(c))
            for j in range(n):
                for e, c in p.diff(j).terms.items():
                    jr.append(i * n + j)
                    jc.append(col(e))
                    jd.append(complex(c))
        M = len(cols)
        D = max(1, max(sum(e) for e in cols))
        idx = np.full((M, D), n, dtype=np.intp)
        for e, ci in cols.items():
            flat = [v for v, a in enumerate(e) for _ in range(a)]
            idx[ci, :len(flat)] = flat
        self.idx = idx
        self.CF = sp.csr_matrix((fd, (fr, fc)), shape=(self.neq, M))
        self.CJ = sp.csr_matrix((jd, (jr, jc)), shape=(self.neq * n, M))
        self.absCF = abs(self.CF)

    def _monomials(self, X: np.ndarray) -> np.ndarray:
        Xe = np.concatenate([X, np.ones((X.shape[0], 1), dtype=X.dtype)], axis=1)
        vals = Xe[:, self.idx[:, 0]]
        for j in range(1, self.idx.shape[1]):
            vals = vals * Xe[:, self.idx[:, j]]
        return vals

    def F(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(self.CF @ self._monomials(X).T).T

    def FJ(self, X: np.ndarray):
        vals = self._monomials(X).T
        F = np.asarray(self.CF @ vals).T
        J = np.asarray(self.CJ @ vals).T.reshape(X.shape[0], self.neq, self.nvars)
        return F, J

    def scale(self, X: np.ndarray) -> np.ndarray:
        """sum_j |c_ij| |x^e_j| per equation: the natural size of F_i at X."""
        vals = np.abs(self._monomials(np.abs(X)))
        return np.asarray(self.absCF @ vals.T).T

    def residual(self, X: np.ndarray) -> np.ndarray:
        """Relative (backward-error style) residual max_i |F_i| / scale_i."""
        F = np.abs(self.F(X))
        return (F / np.maximum(self.scale(X), 1e-300)).max(axis=1)


def _batched_solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(A, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        return np.einsum("bij,bj->bi", np.linalg.pinv(A), b)


def _as_system(F) -> PolySystem:
    return F if isinstance(F, PolySystem) else PolySystem(F)


def _validate(F: PolySystem):
    if not F.is_square():
        raise ValueError(f"system is not square: {len(F)} equations in {F.nvars} unknowns")
    for i, p in enumerate(F):
        if p.is_zero():
            raise ValueError(f"equation {i} is the zero polynomial")


class _Homotopy:
    def __init__(self, F: PolySystem, rng: np.random.Generator):
        self.n = F.nvars
        self.degs = np.array(F.degrees(), dtype=float)
        self.dint = [int(d) for d in self.degs]
        self.Fh = CompiledSystem([p.to_complex().homogenize(d) for p, d in zip(F, self.dint)])
        self.c = np.exp(2j * np.pi * rng.random(self.n))
        self.gamma = np.exp(2j * np.pi * rng.random())
        self.a = np.exp(2j * np.pi * rng.random(self.n + 1))

    def start_points(self, path_ids: np.ndarray) -> np.ndarray:
        digits = np.array(np.unravel_index(path_ids, self.dint)).T  # (B, n)
        roots = self.c ** (1.0 / self.degs) * np.exp(2j * np.pi * digits / self.degs)
        Z = np.concatenate([roots, np.ones((len(path_ids), 1))], axis=1)
        return Z / (Z @ self.a)[:, None]

    def G(self, Z):
        zi, z0 = Z[:, :self.n], Z[:, self.n:]
        Gv = zi ** self.degs - self.c * z0 ** self.degs
        d = self.degs
        dGi = d * zi ** (d - 1)
        dG0 = -self.c * d * z0 ** (d - 1)
        return Gv, dGi, dG0

    def eval(self, Z, t):
        """H, dH/dz (augmented with the patch row) and dH/dt."""
        B, n = Z.shape[0], self.n
        F, JF = self.Fh.FJ(Z)
        Gv, dGi, dG0 = self.G(Z)
        s = ((1 - t) * self.gamma)[:, None]
        H = s * Gv + t[:, None] * F
        J = np.empty((B, n + 1, n + 1), dtype=complex)
        J[:, :n, :] = t[:, None, None] * JF
        diag = np.arange(n)
        J[:, diag, diag] += s * dGi
        J[:, :n, n] += s * dG0
        J[:, n, :] = self.a
        Ht = F - self.gamma * Gv
        return H, J, Ht

    def velocity(self, Z, t):
        _, J, Ht = self.eval(Z, t)
        rhs = np.concatenate([-Ht, np.zeros((Z.shape[0], 1))], axis=1)
        return _batched_solve(J, rhs)

    def newton_step(self, Z, t):
        H, J, _ = self.eval(Z, t)
        rhs = np.concatenate([-H, (1 - Z @ self.a)[:, None]], axis=1)
        return _batched_solve(J, rhs)


ACTIVE, DONE, DIVERGED, FAILED, UNDERFLOW = 0, 1, 2, 3, 4


def _track(hom: _Homotopy, Z: np.ndarray, cfg: SolveConfig, t0: np.ndarray | None = None,
           end_gap: float | None = None, h0: float | None = None):
    B = Z.shape[0]
    t = np.zeros(B) if t0 is None else t0.copy()
    h = np.full(B, cfg.h_init if h0 is None else h0)
    status = np.zeros(B, dtype=int)
    succ = np.zeros(B, dtype=int)
    halv = np.zeros(B, dtype=int)
    nsteps = np.zeros(B, dtype=int)
    n = hom.n
    t_end = 1.0 - (cfg.end_gap if end_gap is None else end_gap)
    while True:
        act = np.flatnonzero(status == ACTIVE)
        if act.size == 0:
            break
        z, tt = Z[act], t[act]
        hh = np.minimum(h[act], t_end - tt)
        # RK4 predictor
        k1 = hom.velocity(z, tt)
        k2 = hom.velocity(z + 0.5 * hh[:, None] * k1, tt + 0.5 * hh)
        k3 = hom.velocity(z + 0.5 * hh[:, None] * k2, tt + 0.5 * hh)
        k4 = hom.velocity(z + hh[:, None] * k3, tt + hh)
        zp = z + (hh / 6.0)[:, None] * (k1 + 2 * k2 + 2 * k3 + k4)
        tn = tt + hh
        tn[tn >= t_end - 1e-15] = t_end
        # Newton corrector, at most 3 iterations
        ok = np.zeros(act.size, dtype=bool)
        bad = np.zeros(act.size, dtype=bool)
        prev = np.full(act.size, np.inf)
        todo = np.arange(act.size)
        for _ in range(3):
            if todo.size == 0:
                break
            dz = hom.newton_step(zp[todo], tn[todo])
            zp[todo] += dz
            nd = np.linalg.norm(dz, axis=1)
            nz = np.linalg.norm(zp[todo], axis=1)
            finite = np.isfinite(nd) & np.isfinite(nz)
            conv = finite & (nd <= cfg.tol_track * nz)
            slow = ~finite | (nd > 0.25 * prev[todo])
            ok[todo[conv]] = True
            bad[todo[~conv & slow]] = True
            prev[todo] = nd
            todo = todo[~conv & ~slow]
        accept = ok & ~bad
        ia, ir = act[accept], act[~accept]
        Z[ia] = zp[accept]
        t[ia] = tn[accept]
        succ[ia] += 1
        halv[ia] = 0
        grow = ia[succ[ia] >= 3]
        h[grow] = np.minimum(2 * h[grow], cfg.h_max)
        succ[grow] = 0
        h[ir] *= 0.5
        succ[ir] = 0
        halv[ir] += 1
        nsteps[act] += 1
        # classification of active paths
        za = Z[ia]
        aff = np.linalg.norm(za[:, :n], axis=1) / np.maximum(np.abs(za[:, n]), 1e-300)
        status[ia[aff > cfg.diverge_norm]] = DIVERGED
        status[ia[(t[ia] >= t_end) & (status[ia] == ACTIVE)]] = DONE
        status[ir[halv[ir] > cfg.max_halvings]] = UNDERFLOW
        status[act[(nsteps[act] >= cfg.max_steps) & (status[act] == ACTIVE)]] = UNDERFLOW
    return Z, t, status, nsteps


def _endgame(hom: _Homotopy, Z: np.ndarray, cfg: SolveConfig) -> tuple[np.ndarray, np.ndarray]:
    """Newton at t = 1; returns the points and a mask of those that converged."""
    one = np.ones(Z.shape[0])
    conv = np.zeros(Z.shape[0], dtype=bool)
    todo = np.arange(Z.shape[0])
    for _ in range(cfg.endgame_iters):
        if todo.size == 0:
            break
        dz = hom.newton_step(Z[todo], one[todo])
        Z[todo] += dz
        nd = np.linalg.norm(dz, axis=1)
        ok = np.isfinite(nd) & (nd <= cfg.tol_refine * np.linalg.norm(Z[todo], axis=1))
        conv[todo[ok]] = True
        todo = todo[np.isfinite(nd) & ~ok]
    return Z, conv


def _finish(hom: _Homotopy, Z: np.ndarray, status: np.ndarray, cfg: SolveConfig, rounds: int = 3) -> np.ndarray:
    """Endgame for paths that reached t = 1 - end_gap.

    A path heading for a far or badly conditioned root can still be too far
    from it at 1 - end_gap for Newton at t = 1; such paths are tracked on with
    the gap shrunk a hundredfold per round.
    """
    idx = np.flatnonzero(status == DONE)
    gap = cfg.end_gap
    for r in range(rounds + 1):
        if idx.size == 0:
            break
        Zs = Z[idx].copy()
        E, conv = _endgame(hom, Z[idx].copy(), cfg)
        Z[idx[conv]] = E[conv]
        if r == rounds:
            Z[idx[~conv]] = E[~conv]
            break
        rest = idx[~conv]
        if rest.size == 0:
            break
        new_gap = gap * 1e-2
        Zr, _, st, _ = _track(hom, Zs[~conv], cfg, t0=np.full(rest.size, 1.0 - gap), end_gap=new_gap, h0=gap)
        Z[rest] = Zr
        # paths that now blow up are left unconverged; the caller classifies them
        keep = st == DONE
        Z[rest[~keep]] = E[~conv][~keep]
        idx = rest[keep]
        gap = new_gap
    return Z


def newton_refine(sysc: CompiledSystem, X: np.ndarray, iters: int = 5, tol: float = 1e-14) -> np.ndarray:
    X = X.copy()
    todo = np.arange(X.shape[0])
    for _ in range(iters):
        if todo.size == 0:
            break
        F, J = sysc.FJ(X[todo])
        dx = _batched_solve(J, -F)
        ok = np.isfinite(dx).all(axis=1)
        X[todo[ok]] += dx[ok]
        nd = np.linalg.norm(dx, axis=1)
        todo = todo[ok & (nd > tol * (1 + np.linalg.norm(X[todo], axis=1)))]
    return X


def _scaled_cond(J: np.ndarray, scale: np.ndarray, x: np.ndarray) -> float:
    # rows divided by the size of each equation at the point (not by the row itself,
    # so a vanishing gradient row still shows up); columns by the size of the coordinate
    col = np.maximum(1.0, np.abs(x))
    return float(np.linalg.cond(J / np.maximum(scale, 1e-300)[:, None] * col[None, :]))


def _cluster(points: np.ndarray, radius: float) -> list[list[int]]:
    if len(points) == 0:
        return []
    emb = np.concatenate([points.real, points.imag], axis=1)
    tree = cKDTree(emb)
    label = -np.ones(len(points), dtype=int)
    groups = []
    for i in range(len(points)):
        if label[i] >= 0:
            continue
        stack, members = [i], []
        label[i] = len(groups)
        while stack:
            j = stack.pop()
            members.append(j)
            for q in tree.query_ball_point(emb[j], radius):
                if label[q] < 0:
                    label[q] = len(groups)
                    stack.append(q)
        groups.append(sorted(members))
    return groups


def solve_total_degree(F, cfg: SolveConfig | None = None) -> SolutionSet:
    cfg = cfg or SolveConfig()
    F = _as_system(F)
    _validate(F)
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    hom = _Homotopy(F, rng)
    affine = CompiledSystem([p.to_complex() for p in F])
    n = F.nvars
    bezout = int(np.prod(hom.dint, dtype=object))
    ends, ends_status = [], []
    steps_total = 0
    for start in range(0, bezout, cfg.chunk):
        ids = np.arange(start, min(start + cfg.chunk, bezout))
        Z = hom.start_points(ids)
        with np.errstate(all="ignore"):
            Z, t, status, nsteps = _track(hom, Z, cfg)
        steps_total += int(nsteps.sum())
        near_end = (status == DONE) | ((status == UNDERFLOW) & (t > 0.9))
        if near_end.any():
            with np.errstate(all="ignore"):
                Z[near_end] = _finish(hom, Z[near_end], status[near_end], cfg)
                stalled = near_end & (status != DONE)
                if stalled.any():
                    Z[stalled] = _endgame(hom, Z[stalled], cfg)[0]
        # a path that reached the end zone either converges at t = 1 or went to
        # infinity / a singular endpoint (diverged); early stalls are failures
        ends.append(Z)
        ends_status.append(np.where(near_end, DONE, np.where(status == DIVERGED, DIVERGED, FAILED)))
    Z = np.concatenate(ends)
    st = np.concatenate(ends_status)
    cand = np.flatnonzero(st == DONE)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        X = Z[cand, :n] / Z[cand, n:]
    finite = np.isfinite(X).all(axis=1) & (np.abs(X).max(axis=1, initial=0) < cfg.diverge_norm)
    X_ok = newton_refine(affine, X[finite]) if finite.any() else X[finite]
    res = affine.residual(X_ok) if len(X_ok) else np.zeros(0)
    good = np.zeros(len(cand), dtype=bool)
    good[np.flatnonzero(finite)[res < cfg.tol_refine]] = True
    Xg = np.zeros((len(cand), n), dtype=complex)
    Xg[np.flatnonzero(finite)] = X_ok
    st[cand[~good]] = DIVERGED
    conv_idx = np.flatnonzero(good)
    pts = Xg[conv_idx]
    points, crossings = [], 0
    if len(pts):
        _, J = affine.FJ(pts)
        res_all = affine.residual(pts)
        scales = affine.scale(pts)
        conds = np.array([_scaled_cond(j, sc, x) for j, sc, x in zip(J, scales, pts)])
        for grp in _cluster(pts, cfg.dedup_radius):
            best = min(grp, key=lambda i: res_all[i])
            # several paths meeting at an ill-conditioned point is a multiple root;
            # at a well-conditioned point it is a path crossing
            sing = bool(conds[best] > cfg.singular_cond or (len(grp) > 1 and conds[best] > cfg.cluster_cond))
            if not sing and len(grp) > 1:
                crossings += len(grp) - 1
            x = pts[best]
            points.append(Solution(x.copy(), float(res_all[best]), sing,
                                   bool(np.abs(x.imag).max(initial=0.0) < cfg.real_tol),
                                   float(conds[best]), len(grp)))
    points.sort(key=lambda s: tuple(np.round(np.concatenate([s.coords.real, s.coords.imag]), 8)))
    out = SolutionSet(points, bezout, int((st == FAILED).sum()), int((st == DIVERGED).sum()),
                      int((st == DONE).sum()), cfg.seed, crossings, time.perf_counter() - t0,
                      {"steps": steps_total})
    if out.paths_failed == bezout:
        raise RuntimeError(f"all {bezout} paths failed")
    log.debug("solve: %s", out.summary())
    return out


def real_solutions(F, cfg: SolveConfig | None = None) -> list[np.ndarray]:
    """Real nonsingular solutions as real vectors."""
    sols = solve_total_degree(F, cfg)
    return [p.real_coords for p in sols.real_points()]
