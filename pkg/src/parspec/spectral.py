"""Eigenvalues and pseudospectra of truncations, and the analytic spectral curves.

Truncation eigenvalues of these non-normal operators are diagnostics only.
The quantitative probe is ``sigma_min(W_n - lambda I)``: it stays small along
the analytic curve ``{psi(1) e^{-s t}} U {0}`` and bounded away from zero off it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as sla

from . import kernels
from .errors import DimensionMismatch, NonConvergence, VariantMismatch, WorkBudgetExceeded
from .operators import TruncatedMatrix, psi_at_one, weighted_matrix
from .poly import ParameterClass, QuadraticSymbol, make_quadratic

TIE_TOL = 1e-14
# rounding floor for sigma_min comparisons across truncation sizes
SIGMA_SLACK = 1e-12
# n^3 * cells, roughly the flop count of one dense SVD per cell
DEFAULT_WORK_BUDGET = 2e12

Window = Tuple[float, float, float, float]


def _as_array(A) -> np.ndarray:
    a = A.entries if isinstance(A, TruncatedMatrix) else np.asarray(A, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def _argument(z: complex) -> float:
    t = math.atan2(z.imag, z.real)
    # (-pi, pi]: a negative real with a -0.0 imaginary part must sort last
    return math.pi if t <= -math.pi + 1e-14 else t


def sort_spectrum(values: Sequence[complex]) -> List[complex]:
    """Order by modulus descending, then argument ascending in ``(-pi, pi]``.

    Moduli within ``1e-14`` (relative to max(1, |z|)) count as ties.
    """
    vals = sorted((complex(v) for v in values), key=lambda z: (-abs(z), _argument(z)))
    out: List[complex] = []
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and abs(vals[i]) - abs(vals[j]) <= TIE_TOL * max(1.0, abs(vals[i])):
            j += 1
        out.extend(sorted(vals[i:j], key=_argument))
        i = j
    return out


def eigenvalues(A) -> List[complex]:
    """All eigenvalues with multiplicity (LAPACK geev: balancing, Hessenberg, shifted QR)."""
    a = _as_array(A)
    try:
        w = sla.eigvals(a, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    return sort_spectrum(w)


def smallest_singular_value(A) -> float:
    a = _as_array(A)
    try:
        s = sla.svdvals(a, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    return float(s[-1])


@dataclass
class PseudospectrumGrid:
    window: Window
    resolution: Tuple[int, int]
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray  # [row, col] = [y, x]


def _cell_centers(lo: float, hi: float, n: int) -> np.ndarray:
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def pseudospectrum_grid(A, window: Window, resolution: Union[int, Tuple[int, int]],
                        *, work_budget: float = DEFAULT_WORK_BUDGET,
                        workers: Optional[int] = None) -> PseudospectrumGrid:
    """``sigma_min(A - lambda I)`` at every cell centre of ``window``.

    The matrix is reduced to complex Schur form once; unitary invariance of
    singular values lets every cell work on the triangular factor.
    """
    a = _as_array(A)
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    if not (1 <= nx <= 1024 and 1 <= ny <= 1024):
        raise ValueError("resolution must be between 1 and 1024 per axis")
    n = a.shape[0]
    work = float(n) ** 3 * nx * ny
    if work > work_budget:
        raise WorkBudgetExceeded(f"{n}^3 x {nx * ny} cells = {work:.3g} > budget {work_budget:.3g}")
    T, _ = sla.schur(a, output="complex")
    x = _cell_centers(window[0], window[1], nx)
    y = _cell_centers(window[2], window[3], ny)
    lams = (x[None, :] + 1j * y[:, None]).ravel()
    out = np.empty(lams.size)
    eye = np.eye(n)

    def run(lo: int, hi: int) -> None:
        for k in range(lo, hi):
            out[k] = smallest_singular_value(T - lams[k] * eye)

    kernels.map_blocks(run, lams.size, workers)
    return PseudospectrumGrid(tuple(window), (nx, ny), x, y, out.reshape(ny, nx))


class CurveVariant(enum.Enum):
    MAIN = "Main"
    SQUARED = "Squared"
    SPECIAL_HALF = "SpecialHalf"


@dataclass
class AnalyticCurve:
    """Samples of ``weight * e^{-s t}`` on ``[0, t_max]``; the point 0 is always included."""

    variant: CurveVariant
    weight: complex
    exponent: complex
    t_max: float
    t: np.ndarray
    samples: np.ndarray
    includes_zero: bool = True

    def at(self, t):
        return self.weight * np.exp(-self.exponent * t)


def curve_exponent(variant: CurveVariant, a: Optional[complex] = None) -> complex:
    """``2a`` for Main, ``4a`` for Squared (``phi o phi``), ``1/2`` for SpecialHalf."""
    variant = CurveVariant(variant)
    if variant is CurveVariant.SPECIAL_HALF:
        if a is not None and complex(a) != 0.5:
            raise VariantMismatch(f"SpecialHalf requires a = 1/2, got {a!r}")
        return 0.5 + 0j
    if a is None:
        raise VariantMismatch(f"{variant.value} requires a parameter")
    s = make_quadratic(a, resolve="boundary" if variant is CurveVariant.SQUARED else None)
    if variant is CurveVariant.MAIN:
        if s.kind is not ParameterClass.INTERIOR:
            raise VariantMismatch(f"Main requires |a - 1/4| < 1/4, got a = {a!r} ({s.kind.value})")
        return 2.0 * s.a
    if s.kind is not ParameterClass.BOUNDARY_CIRCLE:
        raise VariantMismatch(f"Squared requires a on the circle, a != 0, 1/2; got {a!r} ({s.kind.value})")
    return 4.0 * s.a


def analytic_spectrum_curve(variant: Union[CurveVariant, str], a: Optional[complex] = None,
                            weight: complex = 1.0, t_max: Optional[float] = None,
                            samples: int = 4001) -> AnalyticCurve:
    variant = CurveVariant(variant)
    s = curve_exponent(variant, a)
    if t_max is None:
        t_max = 40.0 / s.real
    t = np.linspace(0.0, t_max, samples)
    w = complex(weight)
    pts = w * np.exp(-s * t)
    pts[0] = w
    return AnalyticCurve(variant, w, s, float(t_max), t, pts)


def curve_distance(points: Sequence[complex], curve: AnalyticCurve) -> List[float]:
    """Distance from each point to the curve together with 0.

    The nearest sample seeds Newton's method on ``Re(conj(c - p) c') = 0``,
    kept inside the two neighbouring parameter intervals; ``c' = -s c``.
    """
    out: List[float] = []
    t, pts = curve.t, curve.samples
    s = curve.exponent
    for p in points:
        p = complex(p)
        d = np.abs(pts - p)
        k = int(np.argmin(d))
        best = min(float(d[k]), abs(p))
        lo, hi = float(t[max(k - 1, 0)]), float(t[min(k + 1, t.size - 1)])
        tt = float(t[k])
        for _ in range(50):
            c = complex(curve.at(tt))
            dc, ddc = -s * c, s * s * c
            grad = (np.conj(c - p) * dc).real
            hess = abs(dc) ** 2 + (np.conj(c - p) * ddc).real
            if hess <= 0:
                break
            nxt = min(max(tt - grad / hess, lo), hi)
            best = min(best, abs(complex(curve.at(nxt)) - p))
            if abs(nxt - tt) <= 1e-15 * max(1.0, abs(tt)):
                break
            tt = nxt
        out.append(float(best))
    return out


def ab_ba_spectral_check(A, B, tol: float = 1e-8) -> bool:
    """Do the nonzero spectra of ``AB`` and ``BA`` agree as multisets?

    Eigenvalues of modulus above ``tol`` are paired greedily (largest first,
    nearest unused partner); a pair farther apart than ``tol`` fails.  An
    unpaired eigenvalue fails unless its modulus is below ``2 tol``, which
    absorbs values straddling the cut-off.
    """
    a, b = _as_array(A), _as_array(B)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    ab = [z for z in eigenvalues(a @ b) if abs(z) > tol]
    ba = [z for z in eigenvalues(b @ a) if abs(z) > tol]
    unused = list(ba)
    for z in ab:
        if not unused:
            if abs(z) > 2 * tol:
                return False
            continue
        k = min(range(len(unused)), key=lambda i: (abs(unused[i] - z), i))
        if abs(unused[k] - z) > tol:
            if abs(z) > 2 * tol:
                return False
            continue
        unused.pop(k)
    return all(abs(z) <= 2 * tol for z in unused)


# ---------------------------------------------------------------------------
# on/off-curve diagnostic
# ---------------------------------------------------------------------------

@dataclass
class ProbePoint:
    label: str
    on_curve: bool
    value: complex
    t: Optional[float]
    sigma_min: Dict[int, float] = field(default_factory=dict)

    def trend_ratio(self) -> float:
        ns = sorted(self.sigma_min)
        lo, hi = self.sigma_min[ns[0]], self.sigma_min[ns[-1]]
        if lo == 0:
            return 0.0 if hi == 0 else math.inf
        return hi / lo

    def non_increasing(self, slack: float = SIGMA_SLACK) -> bool:
        vals = [self.sigma_min[n] for n in sorted(self.sigma_min)]
        return all(b <= a + slack for a, b in zip(vals, vals[1:]))


@dataclass
class CurveDiagnostic:
    curve: AnalyticCurve
    n_list: List[int]
    points: List[ProbePoint]

    @property
    def on_points(self) -> List[ProbePoint]:
        return [p for p in self.points if p.on_curve]

    @property
    def off_points(self) -> List[ProbePoint]:
        return [p for p in self.points if not p.on_curve]

    def separation_ratio(self) -> float:
        """max on-curve sigma_min over min off-curve sigma_min, both at the largest n."""
        n = max(self.n_list)
        on = max(p.sigma_min[n] for p in self.on_points)
        off = min(p.sigma_min[n] for p in self.off_points)
        return on / off

    def passes(self, ratio: float = 0.2) -> bool:
        return all(p.non_increasing() for p in self.on_points) and self.separation_ratio() < ratio


def default_off_points(curve: AnalyticCurve) -> List[complex]:
    w = curve.weight
    cands = [-w, 2 * w, 1.5j * w]
    dist = curve_distance(cands, curve)
    return [c for c, d in zip(cands, dist) if d > 0.3 * abs(w)]


def on_off_curve_diagnostic(psi, phi, curve: AnalyticCurve, on_t: Sequence[float] = (0.0, 0.5, 1.0, 2.0),
                            off_points: Optional[Sequence[complex]] = None,
                            n_list: Sequence[int] = (64, 128, 256)) -> CurveDiagnostic:
    """Tabulate ``sigma_min(W_n - lambda I)`` for on- and off-curve ``lambda`` across ``n``."""
    if off_points is None:
        off_points = default_off_points(curve)
    probes = [ProbePoint(f"on:t={t:g}", True, complex(curve.at(t)), float(t)) for t in on_t]
    probes += [ProbePoint(f"off:{complex(z)}", False, complex(z), None) for z in off_points]
    n_list = sorted(int(n) for n in n_list)
    for n in n_list:
        W = weighted_matrix(psi, phi, n).entries
        eye = np.eye(n)
        for p in probes:
            p.sigma_min[n] = smallest_singular_value(W - p.value * eye)
    return CurveDiagnostic(curve, n_list, probes)


@dataclass
class SpectrumReport:
    eigenvalues: List[complex]
    n: int
    curve: AnalyticCurve
    distances: List[float]
    pseudo: Optional[PseudospectrumGrid] = None


def spectrum_report(psi, phi, curve: AnalyticCurve, n: int, *, window: Optional[Window] = None,
                    resolution: Optional[Union[int, Tuple[int, int]]] = None,
                    work_budget: float = DEFAULT_WORK_BUDGET) -> SpectrumReport:
    W = weighted_matrix(psi, phi, n)
    ev = eigenvalues(W)
    pseudo = None
    if window is not None and resolution:
        pseudo = pseudospectrum_grid(W, window, resolution, work_budget=work_budget)
    return SpectrumReport(ev, n, curve, curve_distance(ev, curve), pseudo)


def select_variant(a) -> CurveVariant:
    """Variant implied by the parameter class (Invalid raises VariantMismatch)."""
    s = a if isinstance(a, QuadraticSymbol) else make_quadratic(a)
    if s.kind is ParameterClass.INTERIOR:
        return CurveVariant.MAIN
    if s.kind is ParameterClass.SPECIAL_HALF:
        return CurveVariant.SPECIAL_HALF
    if s.kind is ParameterClass.BOUNDARY_CIRCLE:
        return CurveVariant.SQUARED
    raise VariantMismatch(f"a = {a!r} is not a self-map parameter")


__all__ = [
    "sort_spectrum", "eigenvalues", "smallest_singular_value", "PseudospectrumGrid",
    "pseudospectrum_grid", "CurveVariant", "AnalyticCurve", "curve_exponent",
    "analytic_spectrum_curve", "curve_distance", "ab_ba_spectral_check", "ProbePoint",
    "CurveDiagnostic", "on_off_curve_diagnostic", "default_off_points", "SpectrumReport",
    "spectrum_report", "select_variant", "psi_at_one",
]
