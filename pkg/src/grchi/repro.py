"""Reproduction suite: each criterion returns a list of named checks with timings.

Used by ``grchi repro`` and by tests/test_acceptance.py.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import charpoly as cp
from . import grassmann as gm
from . import mldeg, morse, planar, poset
from .mpoly import MPoly, PolySystem
from .solve import SolveConfig, solve_total_degree
from .symfunc import GrSpec, Partition, SchurClass, gamma_poly
from .unipoly import UniPoly

G24, G25 = GrSpec(2, 4), GrSpec(2, 5)

GAMMA_24 = [6, 12, 14, 8, 2]
GAMMA_25 = [10, 30, 60, 75, 57, 25, 5]
CHI_T_24 = [6, -4, 4, -2, 2]
CHI_T_25 = [10, -8, 6, -4, 7, 0, 5]
TABLE_GENERIC_24 = [8, 16, 32, 62, 114, 198, 326, 512]
TABLE_GENERIC_25 = [5, 25, 82, 220, 520, 1120, 2240, 4212]
TABLE_SCHUBERT_24 = [4, 11, 26, 55, 106, 189, 316, 501]
TABLE_SCHUBERT_25 = [1, 10, 46, 150, 400, 931, 1960, 3816]
CHI_S_25 = (10, 9, 8, 7, 7, 0, 5)
TABLE_CYCLE = [0, 1, 8, 27, 66, 135, 246, 413]
TABLE_D = list(range(4, 12))


@dataclass
class Check:
    name: str
    passed: bool
    info: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)
    elapsed: float = 0.0
    error: str = ""

    @property
    def passed(self) -> bool:
        return not self.error and bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, info: str = ""):
        self.checks.append(Check(name, bool(passed), info))

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        n_ok = sum(c.passed for c in self.checks)
        tail = f"; error: {self.error}" if self.error else ""
        bad = "; failed: " + ", ".join(f"{c.name} ({c.info})" for c in self.failures()) if self.failures() else ""
        return f"criterion {self.number}: {status} - {self.title} [{n_ok}/{len(self.checks)} checks, {self.elapsed:.1f}s]{bad}{tail}"

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed, "elapsed_s": round(self.elapsed, 2),
                "error": self.error, "checks": [c.__dict__ for c in self.checks]}


def clear_symbolic_caches():
    from . import symfunc
    for name in dir(symfunc):
        obj = getattr(symfunc, name)
        if hasattr(obj, "cache_clear"):
            obj.cache_clear()


def _timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


# -- 1-3: symbolic --------------------------------------------------------------

def criterion_1() -> CriterionResult:
    res = CriterionResult(1, "gamma polynomials of Gr(2,4) and Gr(2,5)")
    for spec, want in [(G24, GAMMA_24), (G25, GAMMA_25)]:
        clear_symbolic_caches()
        got, dt = _timed(gamma_poly, spec)
        res.add(f"gamma {spec}", list(got.coeffs) == want, f"got {list(got.coeffs)}")
        res.add(f"gamma {spec} runtime < 1 s", dt < 1.0, f"{dt:.3f}s")
    return res


def criterion_2(samples: int = 1000, seed: int = 2) -> CriterionResult:
    res = CriterionResult(2, "Aluffi involution gives chi_X(t); I o I = id")
    for spec, want in [(G24, CHI_T_24), (G25, CHI_T_25)]:
        got = cp.aluffi_involution(gamma_poly(spec))
        res.add(f"chi_X(t) {spec}", [got[i] for i in range(len(want))] == want and got.degree == len(want) - 1,
                f"got {list(got.coeffs)}")
        res.add(f"I(chi_X) = gamma {spec}", cp.aluffi_involution(got) == gamma_poly(spec))
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(samples):
        deg = int(rng.integers(0, 13))
        p = UniPoly([int(c) for c in rng.integers(-50, 51, size=deg + 1)])
        bad += cp.aluffi_involution(cp.aluffi_involution(p)) != p
    res.add(f"I o I = id on {samples} random polynomials", bad == 0, f"{bad} mismatches")
    return res


def criterion_3() -> CriterionResult:
    res = CriterionResult(3, "generic tables for Gr(2,4) and Gr(2,5)")
    for spec, want in [(G24, TABLE_GENERIC_24), (G25, TABLE_GENERIC_25)]:
        clear_symbolic_caches()
        t = time.perf_counter()
        chis = cp.chi_sections_generic(spec)
        got = [cp.generic_count(spec, chis, d) for d in TABLE_D]
        dt = time.perf_counter() - t
        res.add(f"table {spec}", got == want, f"got {got}")
        res.add(f"table {spec} runtime < 1 s", dt < 1.0, f"{dt:.3f}s")
    return res


# -- 4-6: counts ----------------------------------------------------------------

def schubert_table(spec: GrSpec, chis=None) -> list:
    chis = chis or cp.chi_sections_schubert(spec)
    return [cp.generic_count(spec, chis, d) for d in TABLE_D]


def _count(arr, seed, confirm, formulation=None):
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return _timed(mldeg.ml_degree, arr, SolveConfig(seed=seed), formulation=formulation, confirm=confirm)


def criterion_4(numeric_ds=(4, 5, 6), seed: int = 3) -> CriterionResult:
    res = CriterionResult(4, "Gr(2,4) Schubert table by recursion and by homotopy counts")
    got = schubert_table(G24)
    res.add("recursion table", got == TABLE_SCHUBERT_24, f"got {got}")
    for d in numeric_ds:
        arr = mldeg.random_schubert_arrangement(G24, d, seed=1)
        rep, dt = _count(arr, seed, confirm=True)
        counts = [r.count for r in rep.runs]
        want = TABLE_SCHUBERT_24[d - 4]
        res.add(f"d={d} count (two seeds)", len(counts) == 2 and all(c == want for c in counts),
                f"counts {counts}, want {want}")
        res.add(f"d={d} runtime < 2 min", dt < 120, f"{dt:.1f}s")
    return res


def criterion_5(ds=(6, 7), seed: int = 3) -> CriterionResult:
    res = CriterionResult(5, "Gr(2,5) Schubert table with numeric fill")
    rec = cp.chi_sections_schubert(G25)
    res.add("chi^S(2) = 8 from recursion", rec.values[2] == 8, f"got {rec.values[2]}")
    samples = {}
    for d in ds:
        arr = mldeg.random_schubert_arrangement(G25, d, seed=1)
        rep, dt = _count(arr, seed, confirm=False)
        samples[d] = rep.count
        res.add(f"d={d} count", rep.count == TABLE_SCHUBERT_25[d - 4], f"got {rep.count}")
        res.add(f"d={d} runtime < 15 min", dt < 900, f"{dt:.1f}s")
    try:
        fit = cp.fit_chi_from_counts(G25, samples, known=rec)
        res.add("fitted chi^S", tuple(fit.values) == CHI_S_25, f"got {fit.values}")
        res.add("fitted table", schubert_table(G25, fit) == TABLE_SCHUBERT_25, f"got {schubert_table(G25, fit)}")
    except ValueError as exc:
        res.add("fitted chi^S", False, str(exc))
    return res


def criterion_6(seed: int = 3) -> CriterionResult:
    res = CriterionResult(6, "six Pluecker, six-plus-one and cycle arrangements")
    six = poset.euler_complement(poset.six_pluecker_poset())
    res.add("six Pluecker via poset", six == 0, f"got {six}")
    rep, dt = _count(mldeg.pluecker_arrangement(), seed, confirm=True)
    res.add("six Pluecker via solver", rep.count == 0, f"got {rep.count} ({dt:.1f}s)")
    spo = poset.euler_complement(poset.six_plus_one_poset())
    res.add("six-plus-one via poset", abs(spo) == 4, f"got {spo}")
    rep, dt = _count(mldeg.six_plus_one_arrangement(), seed, confirm=True)
    res.add("six-plus-one via solver", rep.count == 4, f"got {rep.count} ({dt:.1f}s)")
    got = [poset.euler_complement(poset.build_cycle_arrangement(d)) for d in TABLE_D]
    res.add("cycle table via poset", got == TABLE_CYCLE, f"got {got}")
    for d in (5, 6):
        rep, dt = _count(mldeg.cycle_arrangement(d), seed, confirm=True)
        want = TABLE_CYCLE[d - 4]
        res.add(f"cycle d={d} via solver", rep.count == want, f"got {rep.count}, want {want}")
        res.add(f"cycle d={d} runtime < 2 min", dt < 120, f"{dt:.1f}s")
    return res


# -- 7-8: real regions ----------------------------------------------------------

def _regions_runs(arr, seeds):
    out = []
    for s in seeds:
        rep, dt = _timed(morse.arrangement_regions, arr, s)
        out.append((s, rep, dt))
    return out


def _stability_checks(res: CriterionResult, label: str, runs, arr):
    sigs = {r.signature() for _, r, _ in runs}
    res.add(f"{label}: identical patterns and chi across seeds", len(sigs) == 1, f"{len(sigs)} distinct results")
    res.add(f"{label}: each run < 10 min", all(dt < 600 for *_, dt in runs), f"max {max(dt for *_, dt in runs):.1f}s")
    s0, r0, _ = runs[0]
    again = morse.arrangement_regions(arr, s0)
    res.add(f"{label}: deterministic per seed", again.to_dict() == r0.to_dict())


def criterion_7(seeds=(0, 1, 2)) -> CriterionResult:
    res = CriterionResult(7, "Morse regions of the three real examples")

    arr = poset_free_fixture("cube_lines.json")
    runs = _regions_runs(arr, seeds)
    r = runs[0][1]
    pats = r.pattern_multiset()
    res.add("cube: 8 regions", r.region_count == 8, f"got {r.region_count}")
    res.add("cube: distinct sign patterns", all(v == 1 for v in pats.values()), str(dict(pats)))
    res.add("cube: chi multiset {0 x7, -2 x1}", r.chi_multiset() == Counter({0: 7, -2: 1}), str(dict(r.chi_multiset())))
    res.add("cube: chi -2 at (+,-,+)", ("+-+", -2) in r.signature(), str(r.signature()))
    _stability_checks(res, "cube", runs, arr)

    arr = poset_free_fixture("four_pluecker.json")
    runs = _regions_runs(arr, seeds)
    r = runs[0][1]
    pats = r.pattern_multiset()
    doubled = {"--+", "+--", "-+-", "+++"}
    res.add("pluecker: 12 regions", r.region_count == 12, f"got {r.region_count}")
    res.add("pluecker: all chi = 1", set(r.chi_multiset()) == {1}, str(dict(r.chi_multiset())))
    res.add("pluecker: doubled patterns", {p for p, c in pats.items() if c == 2} == doubled
            and all(pats[p] == 1 for p in pats if p not in doubled) and len(pats) == 8, str(dict(pats)))
    _stability_checks(res, "pluecker", runs, arr)

    arr = poset_free_fixture("schubert_example.json")
    runs = _regions_runs(arr, seeds)
    r = runs[0][1]
    pats = r.pattern_multiset()
    sig = r.signature()
    others = [(p, c) for p, c in sig if p != "---"]
    res.add("second: 9 regions", r.region_count == 9, f"got {r.region_count}")
    res.add("second: (-,-,-) twice", pats["---"] == 2, str(dict(pats)))
    res.add("second: chi -2 at (+,+,-)", ("++-", -2) in sig, str(sig))
    res.add("second: chi 1 at (+,+,+)", ("+++", 1) in sig, str(sig))
    res.add("second: five other regions with chi 0",
            sum(1 for p, c in others if c == 0) == 5 and len(others) == 7, str(others))
    _stability_checks(res, "second", runs, arr)
    return res


def poset_free_fixture(name: str) -> gm.Arrangement:
    return gm.load_arrangement(poset.DATA_DIR / name)


def criterion_8(trials: int = 20) -> CriterionResult:
    res = CriterionResult(8, "region counts of random Schubert arrangements")
    for d, allowed in [(4, set(range(8, 10))), (5, set(range(16, 20)))]:
        counts = []
        for s in range(trials):
            rep = morse.arrangement_regions(morse.sample_schubert_arrangement(d, s), s)
            counts.append(rep.region_count)
        res.add(f"{d} hyperplanes: counts in {sorted(allowed)}", set(counts) <= allowed,
                f"observed {dict(sorted(Counter(counts).items()))}")
    return res


# -- 9: properties ----------------------------------------------------------------

def random_poset(rng, size: int) -> poset.IntersectionPoset:
    """Random ranked poset with a unique bottom."""
    ranks = [0] + sorted(int(r) for r in rng.integers(1, 5, size=size - 1))
    elems = [poset.Element(f"e{i}", ranks[i]) for i in range(size)]
    rel = []
    for j in range(1, size):
        lower = [i for i in range(size) if ranks[i] < ranks[j]]
        picks = {0} | {i for i in lower if rng.random() < 0.4}
        rel += [(f"e{i}", f"e{j}") for i in picks]
    return poset.IntersectionPoset.from_relations(elems, rel)


def moebius_roundtrip(P: poset.IntersectionPoset, f: dict) -> bool:
    g = {x.id: f[x.id] + sum(f[z] for z in P.below[x.id]) for x in P.elements}
    back = {x.id: sum(poset.moebius_interval(P, z, x.id) * g[z] for z in P.below[x.id] | {x.id}) for x in P.elements}
    return back == f


def pieri_expected(lam: Partition, spec: GrSpec) -> dict:
    out = {}
    parts = list(lam) + [0] * (spec.k - len(lam))
    for i in range(spec.k):
        new = parts.copy()
        new[i] += 1
        if (i == 0 or new[i] <= new[i - 1]) and new[i] <= spec.n - spec.k:
            out[Partition(new)] = 1
    return out


def all_partitions(spec: GrSpec):
    for parts in itertools.product(range(spec.n - spec.k + 1), repeat=spec.k):
        if all(a >= b for a, b in zip(parts, parts[1:])):
            yield Partition(parts)


def pluecker_vanish(spec: GrSpec, P) -> bool:
    v = gm.pluecker_from_matrix(P)
    return all(rel.evaluate(list(v.coords)) == 0 for rel in gm.pluecker_relations(spec))


def bezout_sound(seed: int, degs) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    n = len(degs)
    polys = []
    for d in degs:
        terms = {}
        for e in itertools.product(range(d + 1), repeat=n):
            if sum(e) <= d:
                terms[e] = float(rng.standard_normal())
        polys.append(MPoly(n, terms))
    sols = solve_total_degree(PolySystem(polys), SolveConfig(seed=seed))
    want = int(np.prod(degs))
    ok = len(sols.nonsingular) == want and sols.paths_failed == 0
    return ok, f"{len(sols.nonsingular)} of {want}"


def fd_gradient_error(mf: morse.MorseFunction, x: np.ndarray, h: float = 1e-6) -> float:
    n = len(x)
    fd = np.array([(mf.m(x + h * e) - mf.m(x - h * e)) / (2 * h) for e in np.eye(n)])
    g = mf.grad(x)
    return float(np.linalg.norm(fd - g) / max(np.linalg.norm(g), 1e-300))


def _sample_in_complement(mf, rng, n):
    while True:
        x = rng.uniform(-2, 2, size=n)
        if np.abs(mf.values(x)).min() > 1e-2:
            return x


def criterion_9(seed: int = 9) -> CriterionResult:
    res = CriterionResult(9, "property suites")
    rng = np.random.default_rng(seed)

    ok = all(moebius_roundtrip(P, {e.id: int(rng.integers(-9, 10)) for e in P.elements})
             for P in (random_poset(rng, int(rng.integers(2, 12))) for _ in range(50)))
    res.add("Moebius inversion round trip on 50 random posets", ok)

    bad = []
    for spec in (G24, G25, GrSpec(3, 6)):
        s1 = SchurClass.sigma(spec, (1,))
        for lam in all_partitions(spec):
            if (s1 * SchurClass.sigma(spec, lam)) != pieri_expected(lam, spec):
                bad.append((str(spec), lam))
        parts = list(all_partitions(spec))
        for _ in range(10):
            a, b, c = (SchurClass.sigma(spec, parts[int(i)]) for i in rng.integers(0, len(parts), size=3))
            if a * b != b * a or (a * b) * c != a * (b * c):
                bad.append((str(spec), "comm/assoc"))
    res.add("Pieri rule and product consistency", not bad, str(bad[:3]))

    bad = 0
    for spec in (G24, G25, GrSpec(3, 6)):
        for _ in range(10):
            P = [[Fraction(int(v)) for v in row] for row in rng.integers(-9, 10, size=(spec.k, spec.n))]
            try:
                bad += not pluecker_vanish(spec, P)
            except ValueError:
                continue
    res.add("Pluecker relations vanish on random matrices", bad == 0, f"{bad} failures")

    for i, degs in enumerate([(2, 2), (3, 2), (2, 2, 2), (3, 3), (2, 2, 3)]):
        ok, info = bezout_sound(100 + i, degs)
        res.add(f"Bezout count on dense system {degs}", ok, info)

    worst = 0.0
    fams = [planar.random_planar_arrangement(s) for s in range(3)]
    fams += [morse.arrangement_functions(morse.sample_schubert_arrangement(4, s)) for s in range(2)]
    for j, fs in enumerate(fams):
        mf = morse.build_morse(fs, j)
        for _ in range(5):
            worst = max(worst, fd_gradient_error(mf, _sample_in_complement(mf, rng, mf.nvars)))
    res.add("gradient vs central differences (rel err < 1e-6)", worst < 1e-6, f"worst {worst:.2e}")

    matched, s, skipped = 0, 0, 0
    mism = []
    while matched < 10 and s < 100:
        fs = planar.random_planar_arrangement(s)
        try:
            grid = planar.oracle_regions(fs)
        except planar.UnresolvedGrid:
            skipped += 1
            s += 1
            continue
        rep = morse.regions_of(fs, s)
        if rep.total_chi != planar.grid_total_chi(grid):
            mism.append((s, rep.total_chi, planar.grid_total_chi(grid)))
        matched += 1
        s += 1
    res.add("Morse total chi = planar grid oracle on 10 arrangements", matched == 10 and not mism,
            f"mismatches {mism}; oracle declined {skipped} unresolved draws")
    return res


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_criterion(number: int) -> CriterionResult:
    t = time.perf_counter()
    try:
        res = CRITERIA[number]()
    except Exception as exc:  # report, don't crash the suite
        res = CriterionResult(number, "raised", error=f"{type(exc).__name__}: {exc}")
    res.elapsed = time.perf_counter() - t
    return res
