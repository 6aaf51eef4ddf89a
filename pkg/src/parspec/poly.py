"""Complex polynomial arithmetic and the quadratic parabolic symbol family.

The family is ``phi(z) = a z^2 + (1 - 2a) z + a``: every member fixes 1 with
``phi'(1) = 1``, and it maps the unit disk into itself exactly when
``|a - 1/4| <= 1/4`` (with ``a = 0`` excluded because it degenerates to the
identity).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np
from scipy import signal

from .errors import AmbiguousBoundary, DegreeOverflow, OffCircleParameter

__all__ = [
    "DEFAULT_DEGREE_CAP",
    "BOUNDARY_DEADBAND",
    "ComplexPolynomial",
    "ParameterClass",
    "QuadraticSymbol",
    "make_quadratic",
    "circle_parameter",
    "boundary_parameter",
    "evaluate",
    "multiply",
    "power",
    "compose",
    "iterate",
    "derivative_at_one",
    "boundary_image_modulus",
]

DEFAULT_DEGREE_CAP = 2**20
BOUNDARY_DEADBAND = 1e-12

# Direct convolution is exact up to rounding; above this operand length the
# FFT route is used to keep high iterates tractable.
_DIRECT_CONVOLVE_MAX = 4096

Number = Union[int, float, complex]


def _as_complex(value: Number) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex scalar: {value!r}")
    return z


class ComplexPolynomial:
    """Dense polynomial with complex coefficients in ascending degree order.

    Trailing zero coefficients are stripped on construction, so ``degree`` is
    the index of the last nonzero coefficient (0 for the zero polynomial).
    Instances are immutable; the coefficient array is read-only.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Number]):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=np.complex128).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        c = c.copy()
        c.setflags(write=False)
        self._c = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return self._c.size - 1

    def __len__(self) -> int:
        return self._c.size

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        return f"ComplexPolynomial({self._c.tolist()!r})"

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            return multiply(self, other)
        return ComplexPolynomial(self._c * complex(other))

    __rmul__ = __mul__

    def __add__(self, other):
        other = other if isinstance(other, ComplexPolynomial) else ComplexPolynomial([other])
        n = max(len(self), len(other))
        out = np.zeros(n, dtype=np.complex128)
        out[: len(self)] += self._c
        out[: len(other)] += other._c
        return ComplexPolynomial(out)

    def __sub__(self, other):
        other = other if isinstance(other, ComplexPolynomial) else ComplexPolynomial([other])
        return self + other * -1

    def derivative(self) -> "ComplexPolynomial":
        if self.degree == 0:
            return ComplexPolynomial([0])
        k = np.arange(1, self._c.size)
        return ComplexPolynomial(self._c[1:] * k)

    def truncated(self, n: int) -> np.ndarray:
        """First ``n`` coefficients, zero padded."""
        out = np.zeros(n, dtype=np.complex128)
        m = min(n, self._c.size)
        out[:m] = self._c[:m]
        return out


def evaluate(p: ComplexPolynomial, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    c = p.coeffs
    if np.ndim(z) == 0:
        acc = complex(c[-1])
        zz = complex(z)
        for coef in c[-2::-1]:
            acc = acc * zz + complex(coef)
        return acc
    z = np.asarray(z, dtype=np.complex128)
    acc = np.full(z.shape, c[-1], dtype=np.complex128)
    for coef in c[-2::-1]:
        acc = acc * z + coef
    return acc


def _check_degree(degree: int, cap: int) -> None:
    if degree > cap:
        raise DegreeOverflow(f"result degree {degree} exceeds cap {cap}")


def _convolve(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if min(x.size, y.size) <= _DIRECT_CONVOLVE_MAX:
        return np.convolve(x, y)
    return signal.fftconvolve(x, y)


def multiply(p: ComplexPolynomial, q: ComplexPolynomial, *, cap: int = DEFAULT_DEGREE_CAP) -> ComplexPolynomial:
    _check_degree(p.degree + q.degree, cap)
    return ComplexPolynomial(_convolve(p.coeffs, q.coeffs))


def power(p: ComplexPolynomial, k: int, *, cap: int = DEFAULT_DEGREE_CAP) -> ComplexPolynomial:
    """``p**k`` by binary powering."""
    if k < 0:
        raise ValueError("power exponent must be nonnegative")
    _check_degree(p.degree * k, cap)
    result = ComplexPolynomial([1])
    base = p
    while k:
        if k & 1:
            result = multiply(result, base, cap=cap)
        k >>= 1
        if k:
            base = multiply(base, base, cap=cap)
    return result


def compose(p: ComplexPolynomial, q: ComplexPolynomial, *, cap: int = DEFAULT_DEGREE_CAP) -> ComplexPolynomial:
    """``p(q(z))`` by Horner's scheme on coefficient vectors."""
    _check_degree(p.degree * q.degree, cap)
    c = p.coeffs
    acc = ComplexPolynomial([c[-1]])
    for coef in c[-2::-1]:
        acc = multiply(acc, q, cap=cap) + coef
    return acc


class ParameterClass(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY_CIRCLE = "BoundaryCircle"
    SPECIAL_HALF = "SpecialHalf"
    INVALID = "Invalid"


@dataclass(frozen=True)
class QuadraticSymbol:
    """The symbol ``a z^2 + (1 - 2a) z + a`` together with its classification."""

    a: complex
    poly: ComplexPolynomial = field(compare=False)
    kind: ParameterClass

    @property
    def is_valid(self) -> bool:
        return self.kind is not ParameterClass.INVALID

    @property
    def on_circle(self) -> bool:
        return self.kind in (ParameterClass.BOUNDARY_CIRCLE, ParameterClass.SPECIAL_HALF)

    @property
    def fixed_point_partner(self) -> complex:
        """The second root ``1 - 1/a`` of ``phi(z) - 1``."""
        return 1 - 1 / self.a


def _exactly_on_circle(a: complex) -> bool:
    re, im = Fraction(a.real), Fraction(a.imag)
    return (re - Fraction(1, 4)) ** 2 + im**2 == Fraction(1, 16)


def _symbol(a: complex, kind: ParameterClass) -> QuadraticSymbol:
    return QuadraticSymbol(a, ComplexPolynomial([a, 1 - 2 * a, a]), kind)


def make_quadratic(a: Number, *, resolve: Optional[str] = None) -> QuadraticSymbol:
    """Validate ``a`` and classify the resulting symbol.

    Parameters
    ----------
    a
        The family parameter.
    resolve
        How to treat a parameter inside the 1e-12 dead-band around the circle
        ``|a - 1/4| = 1/4`` that is not exactly representable on it.  ``None``
        raises :class:`AmbiguousBoundary`; ``"boundary"`` snaps ``a`` radially
        onto the circle; ``"interior"`` keeps ``a`` and classifies it Interior.

    Returns
    -------
    QuadraticSymbol
        Invalid symbols are returned, not raised, so callers can report them.
    """
    a = _as_complex(a)
    if resolve not in (None, "boundary", "interior"):
        raise ValueError(f"unknown resolve mode {resolve!r}")
    if a == 0:
        return _symbol(a, ParameterClass.INVALID)
    if a == 0.5:
        return _symbol(a, ParameterClass.SPECIAL_HALF)
    gap = abs(a - 0.25) - 0.25
    if abs(gap) < BOUNDARY_DEADBAND:
        if _exactly_on_circle(a):
            return _symbol(a, ParameterClass.BOUNDARY_CIRCLE)
        if resolve == "boundary":
            u = (a - 0.25) / abs(a - 0.25)
            return _symbol(0.25 + 0.25 * u, ParameterClass.BOUNDARY_CIRCLE)
        if resolve == "interior":
            return _symbol(a, ParameterClass.INTERIOR)
        raise AmbiguousBoundary(
            f"a = {a!r} lies within {BOUNDARY_DEADBAND:g} of |a - 1/4| = 1/4; "
            "pass resolve='boundary' or resolve='interior'"
        )
    if gap < 0:
        return _symbol(a, ParameterClass.INTERIOR)
    return _symbol(a, ParameterClass.INVALID)


def circle_parameter(theta: float) -> QuadraticSymbol:
    """Symbol for ``a = 1/4 + e^{i theta}/4`` on the parameter circle."""
    a = 0.25 + 0.25 * cmath.exp(1j * theta)
    if abs(a) < 1e-15:
        return _symbol(0j, ParameterClass.INVALID)
    return make_quadratic(a, resolve="boundary")


def boundary_parameter(A: float) -> QuadraticSymbol:
    """Circle symbol with real part ``A`` and nonnegative imaginary part."""
    if not 0 < A <= 0.5:
        raise OffCircleParameter(f"real part {A!r} outside (0, 1/2]")
    B = math.sqrt(max(A / 2 - A * A, 0.0))
    return make_quadratic(complex(A, B), resolve="boundary")


def iterate(s: QuadraticSymbol, n: int, *, cap: int = DEFAULT_DEGREE_CAP) -> ComplexPolynomial:
    """Coefficients of the ``n``-fold self-composition ``phi_n``."""
    if n < 0:
        raise ValueError("iteration count must be nonnegative")
    if n and 2**n > cap:
        raise DegreeOverflow(f"phi_{n} has degree 2^{n} > cap {cap}")
    result = ComplexPolynomial([0, 1])
    for _ in range(n):
        result = compose(s.poly, result, cap=cap)
    return result


def derivative_at_one(s: QuadraticSymbol, k: int) -> complex:
    """``phi^{(k)}(1)`` for ``k`` in {1, 2}; equals 1 and ``2a`` respectively."""
    if k not in (1, 2):
        raise ValueError("only first and second derivatives are supported")
    d = s.poly.derivative()
    if k == 2:
        d = d.derivative()
    return evaluate(d, 1.0)


def boundary_image_modulus(a: Number, X: float) -> float:
    """``|phi(z)|^2`` for ``z = X + iY`` on the unit circle, ``a`` on the parameter circle.

    On the circle ``A^2 + B^2 = A/2`` the squared modulus collapses to the
    quadratic ``2 A X^2 - 2A + 1`` in ``X = Re z``.
    """
    a = _as_complex(a)
    A, B = a.real, a.imag
    if not (0 < A <= 0.5) or abs(A * A + B * B - A / 2) > BOUNDARY_DEADBAND:
        raise OffCircleParameter(f"a = {a!r} is not on |a - 1/4| = 1/4")
    if not -1.0 <= X <= 1.0:
        raise OffCircleParameter(f"X = {X!r} is not the real part of a unit-circle point")
    return 2 * A * X * X - 2 * A + 1
