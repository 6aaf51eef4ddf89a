"""Property suites run by ``parspec audit``.

Each suite draws from its own Philox stream split off the run seed, so a
fixed seed reproduces the report byte for byte.
"""

from __future__ import annotations

import math
from typing import Any, Dict, List

import numpy as np

from . import dynamics as dyn
from .elf import ELFStatus, classify_elf, elf_expression
from .errors import NoContraction
from .poly import ParameterClass, boundary_image_modulus, boundary_parameter, make_quadratic
from .report import generators
from .spectral import ab_ba_spectral_check

TABLE_A = (0.125, 0.25, 0.375, 0.5)
TABLE_R = (0.0, 0.5, 1.0, 1.5, 2.0)
CLOSED_FORM_STEPS = 20


def _phi(a, z):
    return a * z * z + (1 - 2 * a) * z + a


def _closed_parameter_disk(rng: np.random.Generator, n: int) -> np.ndarray:
    rho = 0.25 * np.sqrt(rng.random(n))
    a = 0.25 + rho * np.exp(1j * rng.uniform(-math.pi, math.pi, n))
    return np.where(a == 0, 0.5, a)


def _open_unit_disk(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.sqrt(rng.random(n)) * np.exp(1j * rng.uniform(-math.pi, math.pi, n))


def _circle_parameters(rng: np.random.Generator, n: int) -> np.ndarray:
    th = rng.uniform(-math.pi, math.pi, n)
    a = 0.25 + 0.25 * np.exp(1j * th)
    return a[np.abs(a) > 1e-9]


def self_map_suite(rng: np.random.Generator, n: int) -> Dict[str, Any]:
    a = _closed_parameter_disk(rng, n)
    z = _open_unit_disk(rng, n)
    img = np.abs(_phi(a, z))
    bad = np.flatnonzero(~(img < 1.0))
    return {"samples": n, "violations": int(bad.size),
            "max_image_modulus": float(img.max()) if n else 0.0, "passed": bad.size == 0}


def boundary_identity_suite(rng: np.random.Generator, n: int) -> Dict[str, Any]:
    a = _circle_parameters(rng, n)
    z = np.exp(1j * rng.uniform(-math.pi, math.pi, a.size))
    err = [abs(abs(_phi(ai, zi)) ** 2 - boundary_image_modulus(ai, zi.real)) for ai, zi in zip(a, z)]
    worst = max(err, default=0.0)
    return {"samples": int(a.size), "max_error": float(worst), "tolerance": 1e-10,
            "passed": worst < 1e-10}


def conjugacy_suite(rng: np.random.Generator, n: int) -> Dict[str, Any]:
    a = _closed_parameter_disk(rng, n)
    z = 2.0 * _open_unit_disk(rng, n)
    res = np.array([dyn.sigma_conjugacy(ai).residual(zi) for ai, zi in zip(a, z)])
    worst = float(res.max()) if n else 0.0
    return {"samples": n, "max_residual": worst, "tolerance": 1e-12, "passed": worst < 1e-12}


def pi_suite(rng: np.random.Generator, n: int) -> Dict[str, Any]:
    pts = dyn.sample_pi_region(n, rng)
    rep = dyn.check_pi_invariance(n, points=pts)
    return {"samples": rep.samples, "steps": 100, "violations": len(rep.violations),
            "passed": rep.passed}


def parameter_disk_suite(rng: np.random.Generator, n: int) -> Dict[str, Any]:
    pts = dyn.sample_parameter_disk(n, rng)
    rep = dyn.check_parameter_disk_invariance(n, points=pts)
    return {"samples": rep.samples, "violations": len(rep.violations),
            "max_identity_residual": rep.max_residual, "passed": rep.passed}


def ab_ba_suite(rng: np.random.Generator, n: int) -> Dict[str, Any]:
    failures = 0
    for _ in range(n):
        k = int(rng.integers(1, 17))
        A = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        B = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        failures += not ab_ba_spectral_check(A, B, 1e-8)
    return {"samples": n, "tolerance": 1e-8, "failures": failures, "passed": failures == 0}


def elf_suite(rng: np.random.Generator, n: int) -> Dict[str, Any]:
    a = _closed_parameter_disk(rng, n)
    worst = 0.0
    mismatches = 0
    for ai in a:
        s = make_quadratic(ai, resolve="boundary")
        worst = max(worst, abs(elf_expression(s) - 2 * s.a))
        want = {ParameterClass.INTERIOR: ELFStatus.ELF,
                ParameterClass.BOUNDARY_CIRCLE: ELFStatus.ELF_AFTER_ONE_COMPOSITION,
                ParameterClass.SPECIAL_HALF: ELFStatus.NOT_ELF}[s.kind]
        mismatches += classify_elf(s).status is not want
    return {"samples": n, "max_expression_error": worst, "classification_mismatches": mismatches,
            "passed": worst < 1e-13 and mismatches == 0}


def farthest_point_suite() -> Dict[str, Any]:
    """Closed-form farthest distance against the lens maximum, and whether the
    sound (oracle) recursion still contracts."""
    rows: List[Dict[str, Any]] = []
    for A in TABLE_A:
        B = math.sqrt(max(A / 2 - A * A, 0.0))
        # -1 + (B/A)i: half the true imaginary offset, kept for comparison
        alt_center = complex(-1.0, B / A)
        for r in TABLE_R:
            fp = dyn.farthest_point_bound(A, r)
            from_alt, _ = dyn.lens_max_distance(alt_center, r)
            rows.append({
                "A": A, "r": r, "paper_value": fp.paper_value, "oracle_value": fp.oracle_value,
                "relative_gap": fp.relative_gap, "center": 1 - 1 / complex(A, B),
                "alt_center": alt_center, "lens_max_from_alt_center": from_alt,
            })
    certify = []
    for A in TABLE_A:
        entry: Dict[str, Any] = {"A": A}
        try:
            tr = dyn.uci_bound_sequence(boundary_parameter(A), dyn.BoundMode.ORACLE, 1e-8, 500)
            entry.update(certified=tr.converged_at is not None, converged_at=tr.converged_at,
                         first_factor=tr.factors[0] if tr.factors else None)
        except NoContraction as exc:
            entry.update(certified=False, converged_at=None,
                         first_factor=exc.trace.factors[-1] if exc.trace and exc.trace.factors else None)
        certify.append(entry)
    return {"table": rows, "max_relative_gap": max(r["relative_gap"] for r in rows),
            "oracle_recursion": certify, "passed": all(c["certified"] for c in certify)}


def closed_form_suite() -> Dict[str, Any]:
    """Does the closed-form recursion stay above the measured sup for n <= 20?"""
    out = []
    for A in TABLE_A:
        s = boundary_parameter(A)
        tr = dyn.uci_bound_sequence(s, dyn.BoundMode.PAPER, 0.0, CLOSED_FORM_STEPS, strict=False)
        sup = dyn.sampled_sup_profile(s, CLOSED_FORM_STEPS)
        first = next((n + 1 for n, (r, m) in enumerate(zip(tr.r, sup)) if m > r + 1e-9), None)
        out.append({"A": A, "first_violation_n": first,
                    "bound_at_20": tr.r[-1], "sampled_sup_at_20": sup[-1]})
    return {"rows": out, "closed_form_valid": all(r["first_violation_n"] is None for r in out)}


def run_audit(samples: int, seed: int) -> Dict[str, Any]:
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    g = generators(seed, 7)
    suites = {
        "self_map": self_map_suite(g[0], samples),
        "boundary_identity": boundary_identity_suite(g[1], samples),
        "conjugacy": conjugacy_suite(g[2], samples),
        "pi_invariance": pi_suite(g[3], samples),
        "parameter_disk_invariance": parameter_disk_suite(g[4], samples),
        "ab_ba": ab_ba_suite(g[5], samples),
        "elf": elf_suite(g[6], samples),
    }
    suites["farthest_point"] = farthest_point_suite()
    informational = {"closed_form_bound": closed_form_suite()}
    return {"suites": suites, "informational": informational,
            "all_passed": all(s["passed"] for s in suites.values())}


__all__ = ["run_audit", "farthest_point_suite", "closed_form_suite"]
