"""``parspec`` command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 ambiguous input, 4 numerical
non-convergence, 5 work budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from . import dynamics as dyn
from .audit import run_audit
from .elf import classify_elf
from .errors import (AmbiguousBoundary, DegreeOverflow, DimensionMismatch, DomainError,
                     NoContraction, NonConvergence, OffCircleParameter, VariantMismatch,
                     WorkBudgetExceeded)
from .poly import ComplexPolynomial, ParameterClass, compose, make_quadratic
from .report import RunManifest, dumps, envelope, write_outputs
from .spectral import (CurveVariant, analytic_spectrum_curve, on_off_curve_diagnostic,
                       select_variant, spectrum_report)
from .svg import basin_svg, spectrum_svg, trace_svg

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_AMBIGUOUS = 3
EXIT_NUMERICAL = 4
EXIT_BUDGET = 5


class UsageError(ValueError):
    pass


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _complex_list(text: str) -> List[complex]:
    return [_complex(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> List[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _window(text: str) -> tuple:
    vals = [float(t) for t in text.split(",")]
    if len(vals) != 4 or not (vals[0] < vals[1] and vals[2] < vals[3]):
        raise argparse.ArgumentTypeError("window must be xmin,xmax,ymin,ymax with min < max")
    return tuple(vals)


def _symbol_class(s) -> str:
    return s.kind.value


# ---------------------------------------------------------------------------
# commands; each returns (json body, extra files)
# ---------------------------------------------------------------------------

def cmd_validate(args) -> tuple:
    s = make_quadratic(args.a, resolve=args.resolve)
    if s.kind is ParameterClass.INVALID:
        raise DomainError(f"a = {args.a} does not give a self-map of the disk")
    v = classify_elf(s)
    body = {
        "a": s.a,
        "class": _symbol_class(s),
        "phi_coeffs": s.poly.coeffs,
        "elf_verdict": {
            "status": v.status,
            "expression_value": v.expression_value,
            "boundary_preimages": v.boundary_preimages,
            "composite_preimages": v.composite_preimages,
            "composite_second_derivative": v.composite_second_derivative,
        },
    }
    return body, {}


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def cmd_uci(args) -> tuple:
    s = make_quadratic(args.a, resolve=args.resolve)
    if s.kind is ParameterClass.INVALID:
        raise DomainError(f"a = {args.a} does not give a self-map of the disk")
    samples = min(args.sample_steps, args.n_max)
    if s.kind is ParameterClass.INTERIOR:
        sup = dyn.sampled_sup_profile(s, samples, args.samples)
        body = {"a": s.a, "class": _symbol_class(s), "mode": "SampledOnly", "target": args.target,
                "r": [], "sampled_sup": sup, "converged_at": None, "factors": [],
                "strictly_decreasing": all(y < x for x, y in zip(sup, sup[1:]))}
        r: List[float] = []
    else:
        mode = dyn.BoundMode.PAPER if args.mode == "paper" else dyn.BoundMode.ORACLE
        tr = dyn.uci_bound_sequence(s, mode, args.target, args.n_max, strict=not args.no_strict,
                                    sample_sup=samples, sample_count=args.samples)
        sup, r = tr.sampled_sup, tr.r
        body = {"a": s.a, "class": _symbol_class(s), "mode": tr.mode, "target": tr.target,
                "r": tr.r, "sampled_sup": tr.sampled_sup, "converged_at": tr.converged_at,
                "factors": tr.factors, "strictly_decreasing": tr.strictly_decreasing}
    rows = []
    for k in range(max(len(r), len(sup))):
        rows.append([k + 1, _num(r[k] if k < len(r) else None), _num(sup[k] if k < len(sup) else None)])
    files = {"uci.csv": _csv(["n", "r_n", "sampled_sup_n"], rows),
             "uci.svg": trace_svg(r, sup)}
    return body, files


def _parse_variant(name: str, s) -> CurveVariant:
    if name == "auto":
        return select_variant(s)
    return {"main": CurveVariant.MAIN, "squared": CurveVariant.SQUARED,
            "special-half": CurveVariant.SPECIAL_HALF}[name]


def cmd_spectrum(args) -> tuple:
    s = make_quadratic(args.a, resolve=args.resolve)
    if s.kind is ParameterClass.INVALID:
        raise DomainError(f"a = {args.a} does not give a self-map of the disk")
    variant = _parse_variant(args.variant, s)
    psi = ComplexPolynomial(args.psi)
    # boundary parameters are studied through the second iterate
    phi = compose(s.poly, s.poly) if variant is CurveVariant.SQUARED else s.poly
    weight = complex(psi(1.0))
    curve = analytic_spectrum_curve(variant, s.a, weight=weight)
    reports = []
    svgs: Dict[str, str] = {}
    for n in args.n:
        rep = spectrum_report(psi, phi, curve, n, window=args.window,
                              resolution=args.resolution or None)
        entry: Dict[str, Any] = {"n": n, "eigenvalues": rep.eigenvalues, "curve_distances": rep.distances,
                                 "max_curve_distance": max(rep.distances, default=0.0)}
        if rep.pseudo is not None:
            entry["pseudospectrum"] = {"resolution": list(rep.pseudo.resolution),
                                       "min_sigma": float(rep.pseudo.values.min()),
                                       "max_sigma": float(rep.pseudo.values.max())}
        reports.append(entry)
        if "svg" in args.emit:
            svgs[f"spectrum_n{n}.svg"] = spectrum_svg(rep.eigenvalues, curve, args.window, rep.pseudo,
                                                      title=f"W_n spectrum, n = {n}")
    body: Dict[str, Any] = {
        "a": s.a, "class": _symbol_class(s), "psi_coeffs": psi.coeffs,
        "curve": {"variant": curve.variant, "weight": curve.weight, "exponent": curve.exponent,
                  "t_max": curve.t_max, "includes_zero": curve.includes_zero},
        "reports": reports,
    }
    if not args.no_diagnostic:
        diag = on_off_curve_diagnostic(psi, phi, curve, n_list=args.diagnostic_n)
        body["diagnostic"] = {
            "n_list": diag.n_list,
            "points": [{"label": p.label, "on_curve": p.on_curve, "value": p.value,
                        "sigma_min": {str(k): v for k, v in sorted(p.sigma_min.items())},
                        "non_increasing": p.non_increasing()} for p in diag.points],
            "separation_ratio": diag.separation_ratio() if diag.off_points else None,
            "passed": diag.passes() if diag.off_points else None,
        }
    files = svgs if "svg" in args.emit else {}
    return body, files


def cmd_basin(args) -> tuple:
    grid = dyn.escape_time_grid(args.window, args.resolution, args.max_iter,
                                args.attraction_radius, args.escape_radius,
                                petal_capture=not args.no_petal)
    inside = dyn.region_inside(dyn.parameter_disk(), grid.points)
    disk_status = grid.status[inside]
    body = {
        "window": list(grid.window), "resolution": list(grid.resolution), "max_iter": grid.max_iter,
        "counts": grid.counts(),
        "parameter_disk": {
            "cells": int(inside.sum()),
            "converged": int(np.count_nonzero(disk_status == dyn.CellStatus.CONVERGED_TO_ZERO)),
            "escaped": int(np.count_nonzero(disk_status == dyn.CellStatus.ESCAPED)),
            "undecided": int(np.count_nonzero(disk_status == dyn.CellStatus.UNDECIDED)),
        },
        "max_iterations_used": int(grid.iterations.max()),
    }
    rows = []
    for i, y in enumerate(grid.y):
        for j, x in enumerate(grid.x):
            rows.append([repr(float(x)), repr(float(y)),
                         dyn.STATUS_LABELS[dyn.CellStatus(int(grid.status[i, j]))],
                         int(grid.iterations[i, j])])
    files = {"basin.csv": _csv(["x", "y", "status", "iterations"], rows),
             "basin.svg": basin_svg(grid)}
    return body, files


def cmd_audit(args) -> tuple:
    return run_audit(args.samples, args.seed), {}


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="parspec", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_a=True):
        sp.add_argument("--out", type=Path, help="write outputs and manifest.json to this directory")
        if with_a:
            sp.add_argument("--a", type=_complex, required=True, help="symbol parameter, e.g. 0.25+0.25i")
            sp.add_argument("--resolve", choices=("boundary", "interior"),
                            help="classify points within 1e-12 of the parameter circle")

    sp = sub.add_parser("validate", help="classify a parameter and its symbol")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("uci", help="bounds on sup |phi_n - 1|")
    common(sp)
    sp.add_argument("--mode", choices=("paper", "oracle"), default="oracle")
    sp.add_argument("--target", type=float, default=1e-8)
    sp.add_argument("--n-max", type=int, default=500)
    sp.add_argument("--samples", type=int, default=4096, help="boundary sample count")
    sp.add_argument("--sample-steps", type=int, default=20, help="iterates to sample")
    sp.add_argument("--no-strict", action="store_true",
                    help="keep iterating when the factor is not below 1")
    sp.set_defaults(func=cmd_uci)

    sp = sub.add_parser("spectrum", help="eigenvalues of truncated weighted composition matrices")
    common(sp)
    sp.add_argument("--psi", type=_complex_list, default=[1.0], help="weight coefficients, low degree first")
    sp.add_argument("--variant", choices=("auto", "main", "squared", "special-half"), default="auto")
    sp.add_argument("--n", type=_int_list, default=[64, 128, 256])
    sp.add_argument("--window", type=_window, default=(-1.5, 2.5, -1.5, 1.5))
    sp.add_argument("--resolution", type=int, default=0, help="pseudospectrum cells per axis (0 = off)")
    sp.add_argument("--emit", type=lambda t: set(t.split(",")), default={"json"})
    sp.add_argument("--diagnostic-n", type=_int_list, default=[64, 128, 256])
    sp.add_argument("--no-diagnostic", action="store_true")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("basin", help="escape-time grid for g(z) = z - z^2")
    common(sp, with_a=False)
    sp.add_argument("--window", type=_window, default=(-1.0, 2.0, -1.5, 1.5))
    sp.add_argument("--resolution", type=int, default=512)
    sp.add_argument("--max-iter", type=int, default=10_000)
    sp.add_argument("--attraction-radius", type=float, default=1e-6)
    sp.add_argument("--escape-radius", type=float, default=1e3)
    sp.add_argument("--no-petal", action="store_true", help="disable cardioid capture")
    sp.set_defaults(func=cmd_basin)

    sp = sub.add_parser("audit", help="run every property suite")
    common(sp, with_a=False)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_audit)
    return p


_PARAM_SKIP = {"func", "out", "command"}


def _manifest(args) -> RunManifest:
    params = {k: v for k, v in vars(args).items() if k not in _PARAM_SKIP}
    if "emit" in params:
        params["emit"] = ",".join(sorted(params["emit"]))
    return RunManifest(args.command, params, seed=getattr(args, "seed", 0))


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        body, files = args.func(args)
    except AmbiguousBoundary as exc:
        return _fail(exc, EXIT_AMBIGUOUS)
    except (DomainError, OffCircleParameter, VariantMismatch, DimensionMismatch,
            DegreeOverflow, ValueError) as exc:
        return _fail(exc, EXIT_INVALID)
    except (NoContraction, NonConvergence) as exc:
        return _fail(exc, EXIT_NUMERICAL)
    except WorkBudgetExceeded as exc:
        return _fail(exc, EXIT_BUDGET)
    manifest = _manifest(args)
    text = dumps(envelope(manifest, body))
    if args.out is not None:
        write_outputs(args.out, manifest, {f"{args.command}.json": text, **files})
    else:
        stdout.write(text)
    return EXIT_OK


def _fail(exc: Exception, code: int) -> int:
    print(f"parspec: error: {exc}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
