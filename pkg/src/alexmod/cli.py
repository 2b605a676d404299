"""Command line front end.

Commands:
  alexander <presentation.json> [--degree i] [--via snf|psi|both]
  thicken <cdga.json> --eta <coeffs> -m <int> [--checks]
  arrangement <arr.json> [--report hodge] [--delta closed-form|pipeline|auto]
  check <module.json> --suite jordan,roots,semisimple [--degree i] [--dim n]
  fixtures --run-all

All output is JSON on stdout (schema alexmod/v1) and deterministic.  Exit
codes: 0 success, 1 mathematical precondition failure or failed check
(the error name is in the JSON), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import accept, arrangements, invariants
from .laurent import LaurentPoly
from .localsys import (
    Epimorphism,
    GroupPresentation,
    alexander_homology,
    presentation_complex,
    torsion_via_psi,
)
from .rmodule import FgRModule, conjugate, torsion_part
from .thicken import (
    BifilteredCDGA,
    Direction,
    ThickenedComplex,
    hodge_graded_interplay,
    tate_graded_check,
    torsion_of_thickening,
    weight_graded,
)

SCHEMA = "alexmod/v1"


class InputError(ValueError):
    pass


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(payload):
    payload = {"schema": SCHEMA, **payload}
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _presentation_from_json(obj):
    try:
        pres = GroupPresentation.from_json(obj)
        eps = Epimorphism(tuple(obj["epimorphism"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed presentation: {exc}") from exc
    return pres, eps


def cmd_alexander(args):
    """Torsion of the degree-i cohomology Alexander module.

    The snf route dualizes the homology in degree i - 1 (conjugate of its
    torsion); the psi route stabilizes kernels of coefficient inclusions.
    """
    obj = _load_json(args.presentation)
    pres, eps = _presentation_from_json(obj)
    pc = presentation_complex(pres, eps)
    i = args.degree
    result = {"command": "alexander", "degree": i, "via": args.via}
    if args.via in ("snf", "both"):
        if i >= 1:
            h = alexander_homology(pc, i - 1)
            result["homology_below"] = h.to_json()
            result["torsion_snf"] = conjugate(torsion_part(h)).to_json()
        else:
            result["torsion_snf"] = FgRModule.zero().to_json()
    if args.via in ("psi", "both"):
        result["torsion_psi"] = torsion_via_psi(pc, i).to_json()
    if args.via == "both":
        agree = result["torsion_snf"] == result["torsion_psi"]
        result["pipelines_agree"] = agree
        if not agree:
            result["error"] = "PipelineDisagreement"
            result["diff"] = {
                "snf": result["torsion_snf"],
                "psi": result["torsion_psi"],
            }
            _emit(result)
            return 1
    _emit(result)
    return 0


def _parse_eta(text, cdga):
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != cdga.dim(1):
        raise InputError(
            f"direction needs {cdga.dim(1)} coefficients, got {len(parts)}"
        )
    return [Fraction(p) for p in parts]


def cmd_thicken(args):
    obj = _load_json(args.cdga)
    try:
        cdga = BifilteredCDGA.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed cdga: {exc}") from exc
    eta = Direction(cdga, _parse_eta(args.eta, cdga), hodge_mode=args.checks)
    thick = ThickenedComplex(cdga, eta, args.m)
    result = {
        "command": "thicken",
        "m": args.m,
        "betti": {str(p): thick.cohomology(p).dim for p in cdga.degrees()},
        "torsion": {
            str(p): torsion_of_thickening(cdga, eta, p).to_json()
            for p in cdga.degrees()
        },
    }
    if args.checks:
        checks = {"d_eta_squared": True}  # construction already verified it
        levels = sorted({t for p in cdga.degrees() for t in thick.weight_levels(p)})
        graded_ok = True
        interplay_ok = True
        tate_ok = True
        for level in levels:
            weight_graded(thick, level)
            tate_ok = tate_ok and tate_graded_check(thick, level)
            for p_level in range(-1, 3):
                rep = hodge_graded_interplay(thick, level, p_level)
                interplay_ok = interplay_ok and rep["ok"]
        checks["graded_differential"] = graded_ok
        checks["hodge_weight_interplay"] = interplay_ok
        checks["tate_shift"] = tate_ok
        result["checks"] = checks
        if not (graded_ok and interplay_ok and tate_ok):
            result["error"] = "StructuralCheckFailed"
            _emit(result)
            return 1
    _emit(result)
    return 0


def _central_point_count(data):
    return sum(1 for _ in data.points)


def cmd_arrangement(args):
    obj = _load_json(args.arrangement)
    try:
        spec = arrangements.ArrangementSpec.from_json(obj)
    except arrangements.DuplicateLine:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed arrangement: {exc}") from exc
    data = arrangements.intersection_data(spec)
    result = {
        "command": "arrangement",
        "d": spec.d,
        "rank": data.rank,
        "points": [
            {"x": str(x), "y": str(y), "multiplicity": m, "lines": list(inc)}
            for x, y, m, inc in data.points
        ],
        "parallel_classes": [list(c) for c in data.parallel_classes],
    }
    if data.rank >= 2:
        osalg = arrangements.os_algebra(spec)
        result["os_betti"] = {str(p): osalg.dim(p) for p in osalg.degrees()}
        result["purity"] = arrangements.purity_criterion(spec)
    if args.report == "hodge":
        delta, provenance = _resolve_delta(spec, data, args.delta)
        report = arrangements.hodge_report(spec.d, delta, provenance)
        result["hodge"] = report.to_json()
    _emit(result)
    return 0


def _resolve_delta(spec, data, mode):
    is_central = (
        len(data.points) == 1 and data.points[0][2] == spec.d and not any(
            len(c) > 1 for c in data.parallel_classes
        )
    )
    if mode in ("closed-form",) or (mode == "auto" and is_central):
        if not is_central:
            raise arrangements.NotEssential(
                "closed form applies to central (concurrent) arrangements only"
            )
        return arrangements.central_delta(spec.d), "closed-form"
    # pipeline: match a built-in fixture by its normalized line set
    for fx in arrangements.all_fixtures():
        if fx.arrangement is not None and set(fx.arrangement.lines) == set(spec.lines):
            pc = presentation_complex(fx.presentation, fx.epimorphism)
            h1 = torsion_part(alexander_homology(pc, 1))
            return h1.order(), "presentation-pipeline"
    if mode == "auto":
        purity = arrangements.purity_criterion(spec)
        if purity.get("applies"):
            return (LaurentPoly.t() - 1) ** (spec.d - 1), "purity-criterion"
    raise arrangements.NotEssential(
        "no built-in presentation matches this arrangement; supply the polynomial"
    )


def cmd_check(args):
    obj = _load_json(args.module)
    try:
        module = FgRModule.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed module: {exc}") from exc
    suites = [s for s in args.suite.split(",") if s]
    checks = invariants.check_suite(
        torsion_part(module), suites, i=args.degree, n=args.dim
    )
    ok = all(entry["ok"] for entry in checks.values())
    _emit({"command": "check", "checks": checks, "ok": ok})
    return 0 if ok else 1


def cmd_fixtures(args):
    if not args.run_all:
        raise InputError("fixtures requires --run-all")
    results = accept.run_all()
    for r in results:
        status = "PASS" if r["ok"] else "FAIL"
        print(
            f"[{status}] criterion {r['criterion']} ({r['seconds']}s): {r['name']}",
            file=sys.stderr,
        )
    # timings are volatile; the emitted JSON must be byte-identical across runs
    stable = [{k: r[k] for k in ("criterion", "name", "ok", "detail")} for r in results]
    _emit({"command": "fixtures", "results": stable})
    return 0 if all(r["ok"] for r in results) else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="alexmod",
        description="Exact Alexander modules, thickened complexes and arrangement reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alexander", help="Alexander modules of a presentation")
    p.add_argument("presentation")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--via", choices=("snf", "psi", "both"), default="snf")
    p.set_defaults(fn=cmd_alexander)

    p = sub.add_parser("thicken", help="thicken a bifiltered cdga")
    p.add_argument("cdga")
    p.add_argument("--eta", required=True, help="comma separated rational coefficients")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--checks", action="store_true")
    p.set_defaults(fn=cmd_thicken)

    p = sub.add_parser("arrangement", help="analyze a rational line arrangement")
    p.add_argument("arrangement")
    p.add_argument("--report", choices=("hodge",), default=None)
    p.add_argument("--delta", choices=("closed-form", "pipeline", "auto"), default="auto")
    p.set_defaults(fn=cmd_arrangement)

    p = sub.add_parser("check", help="run invariant checkers on a module")
    p.add_argument("module")
    p.add_argument("--suite", required=True)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--dim", type=int, default=2)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("fixtures", help="run the built-in acceptance suite")
    p.add_argument("--run-all", action="store_true")
    p.set_defaults(fn=cmd_fixtures)

    return parser


MATH_ERRORS = (
    arrangements.DuplicateLine,
    arrangements.NotEssential,
    arrangements.InconsistentFixedPart,
    arrangements.OddNonUnityPart,
)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        _emit({"error": "MalformedInput", "message": str(exc)})
        return 2
    except MATH_ERRORS as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1
    except (ValueError, KeyError, RuntimeError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
