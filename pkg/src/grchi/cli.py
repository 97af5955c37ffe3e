"""Command-line entry point: ``grchi <command> ...``.

Human-readable output goes to stdout; ``--out`` writes a JSON report.  The
exit status is 0 only when every internal cross-check of the command passed.
"""

from __future__ import annotations

import argparse
import json
import logging
import platform
import sys
import warnings
from math import comb
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from . import charpoly as cp
from . import grassmann as gm
from . import mldeg, morse, poset, repro
from .solve import SolveConfig
from .symfunc import GrSpec, MAX_DIM, gamma_poly

log = logging.getLogger("grchi")


def _versions() -> dict:
    return {"grchi": __version__, "python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__}


def _config(args) -> SolveConfig:
    kw = {"seed": args.seed}
    if getattr(args, "tol_track", None) is not None:
        kw["tol_track"] = args.tol_track
    if getattr(args, "tol_refine", None) is not None:
        kw["tol_refine"] = args.tol_refine
    return SolveConfig(**kw)


def _emit(args, report: dict):
    report.setdefault("versions", _versions())
    if getattr(args, "out", None):
        Path(args.out).write_text(json.dumps(report, indent=1, default=str))
        print(f"report written to {args.out}")


def _spec(args, parser) -> GrSpec:
    if args.k is None or args.n is None:
        parser.error("--k and --n are required")
    try:
        spec = GrSpec(args.k, args.n)
    except ValueError as exc:
        parser.error(str(exc))
    if spec.m > MAX_DIM:
        parser.error(f"dimension k(n-k) = {spec.m} exceeds {MAX_DIM}")
    return spec


def _fmt_poly(coeffs) -> str:
    out = ""
    for i, c in enumerate(coeffs):
        if c == 0 and i:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        body = f"{abs(c)}{mono}"
        out += body if not out else (f" - {body}" if c < 0 else f" + {body}")
        if not i and c < 0:
            out = f"-{body}"
    return out


def _table(title: str, ds, values) -> str:
    w = max(len(str(v)) for v in list(ds) + list(values)) + 1
    return (f"{title}\n  d    " + "".join(f"{d:>{w}}" for d in ds)
            + "\n  P(d) " + "".join(f"{v:>{w}}" for v in values))


# -- commands -------------------------------------------------------------------

def cmd_chi_generic(args, parser) -> int:
    spec = _spec(args, parser)
    gamma = gamma_poly(spec)
    chi_t = cp.chi_polynomial(spec)
    chis = cp.chi_sections_generic(spec)
    ds = list(range(4, 12)) if args.d is None else [args.d]
    counts = [cp.generic_count(spec, chis, d) for d in ds]
    checks = {
        "involution returns gamma": cp.aluffi_involution(chi_t) == gamma,
        "chi(0) = C(n,k)": chis.values[0] == spec.euler,
    }
    if spec.k == 1 or spec.k == spec.n - 1:
        # projective space: complement of d generic hyperplanes ~ bounded regions of d-1 affine ones
        checks["bounded-region count for projective space"] = all(
            abs(c) == (comb(d - 2, spec.m) if d >= 2 else abs(c)) for d, c in zip(ds, counts))
    print(f"{spec}, dimension {spec.m}")
    print(f"gamma(t) = {_fmt_poly(gamma.coeffs)}")
    print(f"chi_X(t) = {_fmt_poly(chi_t.coeffs)}")
    print("chi(i)   = " + ", ".join(str(v) for v in chis.values))
    print(_table("generic hyperplane counts |chi|:", ds, [abs(c) for c in counts]))
    for name, ok in checks.items():
        print(f"check {name}: {'ok' if ok else 'FAILED'}")
    _emit(args, {"command": "chi-generic", "k": spec.k, "n": spec.n, "gamma": list(gamma.coeffs),
                 "chi_t": list(chi_t.coeffs), "chi": chis.values, "counts": dict(zip(ds, counts)),
                 "checks": checks})
    return 0 if all(checks.values()) else 1


def _numeric_fill(spec: GrSpec, rec: cp.SectionalChi, args) -> tuple[cp.SectionalChi, dict]:
    need = len(rec.missing())
    ds = list(range(spec.m, spec.m + need + 1))  # one extra sample as a consistency check
    samples, runs = {}, {}
    for d in ds:
        arr = mldeg.random_schubert_arrangement(spec, d, seed=args.seed + d)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rep = mldeg.ml_degree(arr, _config(args), formulation=args.formulation)
        if rep.paths_failed:
            raise RuntimeError(f"d={d}: {rep.paths_failed} paths failed; count unreliable")
        samples[d] = rep.count
        runs[d] = rep.to_dict()
        print(f"  numeric count d={d}: {rep.count}  (bezout {rep.bezout}, seed {rep.seed})")
    fit = cp.fit_chi_from_counts(spec, samples, known=rec)
    return fit, {"samples": samples, "runs": runs}


def cmd_chi_schubert(args, parser) -> int:
    spec = _spec(args, parser)
    rec = cp.chi_sections_schubert(spec)
    extra = {}
    chis = rec
    ok = True
    if args.numeric_fill and rec.missing():
        print(f"filling chi^S at {rec.missing()} from homotopy counts ...")
        try:
            chis, extra = _numeric_fill(spec, rec, args)
        except (ValueError, RuntimeError) as exc:
            print(f"numeric fill failed: {exc}")
            ok = False
    print(f"{spec}, Schubert divisors")
    for i, v in enumerate(chis.values):
        prov = chis.provenance[i].value if hasattr(chis.provenance[i], "value") else chis.provenance[i]
        note = rec.notes[i] if i < len(rec.notes) else ""
        print(f"  chi^S({i}) = {'Unknown' if v is None else v:<8} [{prov}] {note}")
    report = {"command": "chi-schubert", "k": spec.k, "n": spec.n, "seed": args.seed,
              "chi_S": chis.values, "provenance": [getattr(p, "value", p) for p in chis.provenance], **extra}
    if chis.is_complete():
        ds = list(range(4, 12)) if args.d is None else [args.d]
        counts = [abs(cp.generic_count(spec, chis, d)) for d in ds]
        print(_table("Schubert divisor counts |chi|:", ds, counts))
        report["counts"] = dict(zip(ds, counts))
    else:
        print("table unavailable: some chi^S are Unknown (use --numeric-fill)")
    _emit(args, report)
    return 0 if ok else 1


def _arrangement_from_args(args, parser) -> gm.Arrangement:
    if args.file:
        try:
            arr = gm.load_arrangement(args.file)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read arrangement: {exc}")
    else:
        spec = _spec(args, parser)
        if args.d is None:
            parser.error("give an arrangement file or --d")
        build = mldeg.random_schubert_arrangement if args.kind == "schubert" else mldeg.random_general_arrangement
        arr = build(spec, args.d, args.seed)
    if len(arr.hyperplanes) == 0:
        parser.error("empty arrangement")
    return arr


def cmd_mldeg(args, parser) -> int:
    arr = _arrangement_from_args(args, parser)
    cfg = _config(args)
    try:
        rep = mldeg.ml_degree(arr, cfg, formulation=args.formulation, prediction=args.expect,
                              confirm=not args.no_confirm)
    except mldeg.NondeterministicCount as exc:
        print(f"FAILED: {exc}")
        return 1
    runs_clean = all(r.clean for r in rep.runs)
    print(f"{arr.name or 'arrangement'} in {arr.spec}: d = {arr.d}, formulation {rep.formulation}")
    print(f"ML degree (admissible critical points): {rep.count}")
    if not rep.identified:
        print(f"note: d < dim = {arr.spec.m}, so the count is not identified with |chi|")
    for r in rep.runs:
        s = r.solutions
        print(f"  seed {r.seed}: {r.count} points, bezout {s.bezout}, failed {s.paths_failed}, "
              f"diverged {s.paths_diverged}, crossings {s.path_crossings}, {s.elapsed:.1f}s")
    checks = {"paths clean": runs_clean}
    if args.expect is not None:
        checks["matches --expect"] = rep.count == args.expect
    for name, ok in checks.items():
        print(f"check {name}: {'ok' if ok else 'FAILED'}")
    report = rep.to_dict()
    report.update({"command": "mldeg", "tolerances": {"tol_track": cfg.tol_track, "tol_refine": cfg.tol_refine},
                   "checks": checks})
    _emit(args, report)
    return 0 if all(checks.values()) else 1


def cmd_regions(args, parser) -> int:
    if args.file:
        arr = _arrangement_from_args(args, parser)
    elif args.d is not None:
        if args.d < 2:
            parser.error("--d must be at least 2 (p12 plus random Schubert divisors)")
        arr = morse.sample_schubert_arrangement(args.d, args.seed)
    else:
        parser.error("give an arrangement file or --d")
    if arr.d < 2:
        parser.error("need the chart hyperplane plus at least one more")
    try:
        rep = morse.arrangement_regions(arr, args.seed, _config(args))
    except (morse.IncompleteCriticalSet, morse.FlowError, morse.NotMorseError) as exc:
        print(f"FAILED: {exc}")
        return 1
    print(f"{arr.name or 'arrangement'}: {rep.region_count} regions, total chi {rep.total_chi}")
    print(f"critical points by index: {dict(sorted(rep.morse_counts.items()))}")
    for r in rep.regions:
        print(f"  ({r.sign_pattern})  chi = {r.chi:>3}  critical points {len(r.critical_point_ids)}")
    checks = {
        "total chi = sum of region chi": rep.total_chi == sum(r.chi for r in rep.regions),
        "minima >= regions": rep.morse_counts.get(0, 0) >= rep.region_count,
    }
    for name, ok in checks.items():
        print(f"check {name}: {'ok' if ok else 'FAILED'}")
    out = rep.to_dict()
    out.update({"command": "regions", "checks": checks})
    _emit(args, out)
    return 0 if all(checks.values()) else 1


def cmd_poset(args, parser) -> int:
    try:
        P = poset.load_poset(args.file)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read poset: {exc}")
    try:
        chi = poset.euler_complement(P)
    except ValueError as exc:
        print(f"FAILED: {exc}")
        return 1
    mu = poset.moebius(P)
    print(f"{len(P)} elements; chi of the complement = {chi}")
    _emit(args, {"command": "poset", "file": str(args.file), "chi": chi, "moebius": mu})
    return 0


def cmd_repro(args, parser) -> int:
    numbers = args.only or sorted(repro.CRITERIA)
    results = []
    for n in numbers:
        if n not in repro.CRITERIA:
            parser.error(f"no criterion {n}")
        res = repro.run_criterion(n)
        print(res.line(), flush=True)
        results.append(res)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    _emit(args, {"command": "repro", "criteria": [r.to_dict() for r in results]})
    return 0 if passed == len(results) else 1


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out", help="write a JSON report to this path")
    common.add_argument("-v", "--verbose", action="store_true")

    spec_args = argparse.ArgumentParser(add_help=False)
    spec_args.add_argument("--k", type=int)
    spec_args.add_argument("--n", type=int)
    spec_args.add_argument("--d", type=int, help="number of hyperplanes")

    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--tol-track", type=float, default=None)
    tol.add_argument("--tol-refine", type=float, default=None)
    tol.add_argument("--formulation", choices=["chart", "cone"], default=None)

    p = argparse.ArgumentParser(prog="grchi", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"grchi {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("chi-generic", parents=[common, spec_args], help="symbolic chi for generic hyperplanes")
    s.set_defaults(func=cmd_chi_generic)

    s = sub.add_parser("chi-schubert", parents=[common, spec_args, tol], help="chi for generic Schubert divisors")
    s.add_argument("--numeric-fill", action="store_true", help="fill Unknown entries from homotopy counts")
    s.set_defaults(func=cmd_chi_schubert)

    s = sub.add_parser("mldeg", parents=[common, spec_args, tol], help="count critical points numerically")
    s.add_argument("file", nargs="?", help="arrangement JSON; otherwise a random one from --k --n --d")
    s.add_argument("--kind", choices=["schubert", "general"], default="schubert")
    s.add_argument("--expect", type=int, default=None, help="fail unless the count equals this")
    s.add_argument("--no-confirm", action="store_true", help="skip the second-seed confirmation run")
    s.set_defaults(func=cmd_mldeg)

    s = sub.add_parser("regions", parents=[common, spec_args, tol], help="real regions via Morse theory")
    s.add_argument("file", nargs="?", help="arrangement JSON; otherwise --d random Schubert divisors in Gr(2,4)")
    s.set_defaults(func=cmd_regions, kind="schubert")

    s = sub.add_parser("poset", parents=[common], help="chi from an intersection poset file")
    s.add_argument("file")
    s.set_defaults(func=cmd_poset)

    s = sub.add_parser("repro", parents=[common], help="run the reproduction suite")
    s.add_argument("--only", type=int, nargs="+", help="criterion numbers to run")
    s.set_defaults(func=cmd_repro)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    return args.func(args, sub)


if __name__ == "__main__":
    sys.exit(main())
