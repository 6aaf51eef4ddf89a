"""Essentially-linear-fractional classification of the quadratic symbols."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from .errors import DomainError
from .poly import ComplexPolynomial, ParameterClass, QuadraticSymbol, compose, evaluate

__all__ = [
    "ELFStatus",
    "ELFVerdict",
    "elf_expression",
    "boundary_preimage_of_one",
    "classify_elf",
]

PREIMAGE_TOL = 1e-12


class ELFStatus(enum.Enum):
    ELF = "ELF"
    ELF_AFTER_ONE_COMPOSITION = "ELFAfterOneComposition"
    NOT_ELF = "NotELF"


@dataclass(frozen=True)
class ELFVerdict:
    status: ELFStatus
    expression_value: complex
    boundary_preimages: List[complex] = field(default_factory=list)
    # certifying data of phi o phi, only for ELFAfterOneComposition
    composite_preimages: Optional[List[complex]] = None
    composite_second_derivative: Optional[complex] = None


def _derivatives_at_one(p: ComplexPolynomial):
    d1 = p.derivative()
    return evaluate(d1, 1.0), evaluate(d1.derivative(), 1.0)


def elf_expression(s: Union[QuadraticSymbol, ComplexPolynomial]) -> complex:
    """``1/phi'(1) - 1 + phi''(1)/phi'(1)^2``; equal to ``2a`` on this family."""
    p = s.poly if isinstance(s, QuadraticSymbol) else s
    d1, d2 = _derivatives_at_one(p)
    if d1 == 0:
        raise DomainError("phi'(1) = 0")
    return 1.0 / d1 - 1.0 + d2 / (d1 * d1)


def _unit_roots(p: ComplexPolynomial) -> List[complex]:
    """Distinct roots of ``p`` in the closed disk (up to ``PREIMAGE_TOL``)."""
    roots = np.roots(p.coeffs[::-1]) if p.degree > 0 else np.array([])
    kept: List[complex] = []
    for r in sorted(roots, key=lambda z: (-z.real, z.imag)):
        if abs(r) <= 1.0 + PREIMAGE_TOL and all(abs(r - k) > 1e-7 for k in kept):
            kept.append(complex(r))
    return kept


def boundary_preimage_of_one(s: QuadraticSymbol) -> List[complex]:
    """Points of ``{1, 1 - 1/a}`` with modulus at most ``1 + 1e-12``."""
    if s.a == 0:
        raise DomainError("a = 0 has no second preimage")
    out = [1.0 + 0j]
    z0 = 1.0 - 1.0 / s.a
    if abs(z0) <= 1.0 + PREIMAGE_TOL:
        out.append(complex(z0))
    return out


def classify_elf(s: QuadraticSymbol) -> ELFVerdict:
    """Interior symbols are ELF, circle symbols other than ``a = 1/2`` become ELF
    after one self-composition, and ``a = 1/2`` is not ELF (nor is any iterate,
    since ``-1`` and ``1`` both map to ``1``)."""
    if s.kind is ParameterClass.INVALID:
        raise DomainError(f"a = {s.a!r} is not a self-map parameter")
    expr = elf_expression(s)
    pre = boundary_preimage_of_one(s)
    if s.kind is ParameterClass.INTERIOR:
        return ELFVerdict(ELFStatus.ELF, expr, pre)
    if s.kind is ParameterClass.SPECIAL_HALF:
        return ELFVerdict(ELFStatus.NOT_ELF, expr, pre)
    phi2 = compose(s.poly, s.poly)
    d2 = evaluate(phi2.derivative().derivative(), 1.0)
    return ELFVerdict(
        ELFStatus.ELF_AFTER_ONE_COMPOSITION,
        expr,
        pre,
        composite_preimages=_unit_roots(phi2 - 1),
        composite_second_derivative=d2,
    )
