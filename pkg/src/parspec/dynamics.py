"""Uniform convergence of iterates to the boundary fixed point 1.

Two regimes of the parameter ``a``:

* on the circle ``|a - 1/4| = 1/4``: a recursive bound ``r_{n+1} = r_n f(r_n)``
  on ``sup |phi_n - 1|``, offered both as a closed-form factor
  (``BoundMode.PAPER``) and as a numerically maximized one-step
  bound over the lens ``{|w - 1| <= r} & {|w| <= 1}`` (``BoundMode.ORACLE``);
* inside the disk: the affine conjugacy to ``g(z) = z - z^2``, the inversion
  ``h(z) = z + 1 + 1/(z - 1)``, the parabolic regions ``Pi + t``, the cardioid
  petal, and escape-time grids of ``g``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .errors import DegreeOverflow, DomainError, NoContraction, PoleAtOne
from .poly import (
    DEFAULT_DEGREE_CAP,
    QuadraticSymbol,
    make_quadratic,
)

REGION_DEADBAND = 1e-12
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

Number = Union[int, float, complex]


class BoundMode(enum.Enum):
    PAPER = "PaperBound"
    ORACLE = "OracleBound"


def _check_A(A: float) -> None:
    if not (0.0 < A <= 0.5) or not math.isfinite(A):
        raise DomainError(f"A = {A!r} outside (0, 1/2]")


def _circle_B(A: float) -> float:
    return math.sqrt(max(A / 2.0 - A * A, 0.0))


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-13, max_iter: int = 200) -> Tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(argmax, max)``.

    The endpoints are evaluated too, so a maximum sitting on the bracket edge
    is never lost.
    """
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    best = max(((lo, f(lo)), (hi, f(hi)), (c, fc), (d, fd)), key=lambda p: p[1])
    return best


# ---------------------------------------------------------------------------
# boundary-circle case
# ---------------------------------------------------------------------------

def r1(A: float) -> float:
    """Starting bound ``max{2 sqrt(1 - 2A), 1}`` (1 once ``A >= 3/8``)."""
    _check_A(A)
    if A < 0.375:
        return max(2.0 * math.sqrt(1.0 - 2.0 * A), 1.0)
    return 1.0


def r1_oracle(a: Number, samples: int = 4096) -> float:
    """``sup |phi(z) - 1|`` over the disk, by boundary sampling plus refinement."""
    s = a if isinstance(a, QuadraticSymbol) else make_quadratic(a, resolve="boundary")
    return sampled_sup_distance(s, 1, samples)


def paper_factor(A: float, r: float) -> float:
    # sqrt(r^2 A + 1/4 - r sqrt((A/2 - A^2)(1 - r^2/4)))
    inner = (A / 2.0 - A * A) * (1.0 - r * r / 4.0)
    return math.sqrt(r * r * A + 0.25 - r * math.sqrt(max(inner, 0.0)))


def lens_max_distance(center: complex, r: float, samples: int = 2049) -> Tuple[float, complex]:
    """Farthest point from ``center`` in ``{|w - 1| <= r} & {|w| <= 1}``.

    A distance is convex, so its maximum over the convex lens sits on the lens
    boundary: an arc of the unit circle and an arc of ``|w - 1| = r``.  Each arc
    is sampled with its endpoints, then the best sample is refined by golden
    section inside its neighbouring interval.
    """
    if r < 0:
        raise DomainError("lens radius must be nonnegative")
    if r == 0:
        return abs(1.0 - center), 1.0 + 0j
    arcs = []
    # unit circle points e^{it} with |e^{it} - 1| <= r
    half = math.pi if r >= 2 else 2.0 * math.asin(r / 2.0)
    arcs.append((lambda t: np.cos(t) + 1j * np.sin(t), -half, half))
    if r < 2:
        # points 1 + r e^{it} with |.| <= 1, i.e. cos t <= -r/2
        lo = math.acos(-r / 2.0)
        arcs.append((lambda t: 1.0 + r * (np.cos(t) + 1j * np.sin(t)), lo, 2.0 * math.pi - lo))
    best_d, best_w = -1.0, 1.0 + 0j
    for param, lo, hi in arcs:
        ts = np.linspace(lo, hi, samples)
        pts = param(ts)
        dist = np.abs(pts - center)
        k = int(np.argmax(dist))
        t_lo, t_hi = ts[max(k - 1, 0)], ts[min(k + 1, samples - 1)]
        t_star, d_star = golden_section_max(lambda t: float(abs(param(t) - center)), t_lo, t_hi)
        if dist[k] > d_star:
            t_star, d_star = ts[k], float(dist[k])
        if d_star > best_d:
            best_d, best_w = d_star, complex(param(t_star))
    return float(best_d), best_w


def _oracle_factor(A: float, r: float) -> float:
    a = complex(A, _circle_B(A))
    z0 = 1.0 - 1.0 / a
    d, _ = lens_max_distance(z0, r)
    return abs(a) * d


def contraction_factor(A: float, r: float, mode: BoundMode = BoundMode.ORACLE) -> float:
    """One-step factor ``f(r)`` with ``sup |phi_{n+1} - 1| <= r f(r)``.

    ``PAPER`` evaluates the closed-form factor.  ``ORACLE``
    uses ``phi(w) - 1 = a (w - 1)(w - z0)`` with ``z0 = 1 - 1/a`` and returns
    ``|a|`` times the largest ``|w - z0|`` over the lens, which is a sound bound.
    """
    _check_A(A)
    if not math.isfinite(r) or r < 0:
        raise DomainError(f"r = {r!r} must be finite and nonnegative")
    if mode is BoundMode.PAPER:
        if r > max(2.0 * math.sqrt(1.0 - 2.0 * A), 1.0) + 1e-12:
            raise DomainError(f"r = {r!r} exceeds r1({A!r}) for the closed form")
        return paper_factor(A, r)
    if r > 2.0 + 1e-12:
        raise DomainError("r above 2 is vacuous: |phi_n - 1| <= 2 on the disk")
    return _oracle_factor(A, r)


class FarthestPoint(tuple):
    """``(paper_value, oracle_value)`` pair for the farthest-point distance."""

    __slots__ = ()

    def __new__(cls, paper_value: float, oracle_value: float):
        return super().__new__(cls, (paper_value, oracle_value))

    @property
    def paper_value(self) -> float:
        return self[0]

    @property
    def oracle_value(self) -> float:
        return self[1]

    @property
    def relative_gap(self) -> float:
        return abs(self[0] - self[1]) / self[1]


def farthest_point_bound(A: float, r: float) -> FarthestPoint:
    """Closed-form ``|z1 - z0|`` next to the true lens maximum from ``z0 = 1 - 1/a``."""
    _check_A(A)
    if not 0.0 <= r <= 2.0:
        raise DomainError(f"r = {r!r} outside [0, 2]")
    B = _circle_B(A)
    q = B / A
    closed = math.sqrt(1.0 + 2.0 * r * r + q * q - 2.0 * q * r * math.sqrt(1.0 - r * r / 4.0))
    a = complex(A, B)
    oracle, _ = lens_max_distance(1.0 - 1.0 / a, r)
    return FarthestPoint(closed, oracle)


@dataclass
class IterationTrace:
    """Bounds ``r_n`` on ``sup |phi_n - 1|`` for ``n = 1, 2, ...``.

    ``r[k]`` and ``sampled_sup[k]`` refer to ``n = k + 1``; ``converged_at`` is
    the first ``n`` with ``r_n < target``.
    """

    a: complex
    mode: BoundMode
    target: float
    r: List[float] = field(default_factory=list)
    sampled_sup: List[float] = field(default_factory=list)
    converged_at: Optional[int] = None
    factors: List[float] = field(default_factory=list)

    def bound(self, n: int) -> float:
        return self.r[n - 1]

    @property
    def strictly_decreasing(self) -> bool:
        return all(y < x for x, y in zip(self.r, self.r[1:]))


def _boundary_symbol(a: Union[Number, QuadraticSymbol]) -> QuadraticSymbol:
    s = a if isinstance(a, QuadraticSymbol) else make_quadratic(a, resolve="boundary")
    if not s.on_circle:
        raise DomainError(f"a = {s.a!r} is not on the parameter circle")
    if s.a.imag < 0:
        # conjugate symbols have mirrored orbits and identical sup distances
        s = make_quadratic(s.a.conjugate(), resolve="boundary")
    return s


def uci_bound_sequence(a: Union[Number, QuadraticSymbol], mode: BoundMode = BoundMode.ORACLE,
                       target: float = 1e-8, n_max: int = 500, *, strict: bool = True,
                       sample_sup: int = 0, sample_count: int = 4096) -> IterationTrace:
    """Run the recursion ``r_{n+1} = r_n f(r_n)`` until ``r_n < target`` or ``n_max``.

    ``PAPER`` starts from :func:`r1`; ``ORACLE`` starts from the measured
    ``sup |phi - 1|`` so every entry is a genuine upper bound.  With
    ``strict=True`` a factor ``>= 1`` raises :class:`NoContraction` carrying the
    partial trace; with ``strict=False`` the recursion continues with the sound
    cap ``r_n <= 2``.  ``sample_sup`` fills ``sampled_sup`` for the first that
    many ``n``.
    """
    s = _boundary_symbol(a)
    A = s.a.real
    trace = IterationTrace(a=s.a, mode=mode, target=target)
    r = r1(A) if mode is BoundMode.PAPER else r1_oracle(s, sample_count)
    for n in range(1, n_max + 1):
        trace.r.append(r)
        if r < target:
            trace.converged_at = n
            break
        if n == n_max:
            break
        f = contraction_factor(A, min(r, 2.0), mode)
        trace.factors.append(f)
        if f >= 1.0 and strict:
            raise NoContraction(
                f"{mode.value} factor {f:.6g} >= 1 at r = {r:.6g} (n = {n}, A = {A:.6g})",
                trace=trace,
            )
        r = r * f
        if not strict:
            r = min(r, 2.0)
    if sample_sup:
        trace.sampled_sup = sampled_sup_profile(s, min(sample_sup, len(trace.r)), sample_count)
    return trace


def _boundary_grid(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


def _phi_n_distance(a: complex, n: int, theta: float) -> float:
    d = complex(math.cos(theta), math.sin(theta)) - 1.0
    for _ in range(n):
        d = d + a * d * d
    return abs(d)


def _check_iterate_degree(n: int, cap: int) -> None:
    if n and 2**n > cap:
        raise DegreeOverflow(f"phi_{n} has degree 2^{n} > cap {cap}")


def sampled_sup_profile(s: QuadraticSymbol, n_max: int, m: int = 4096,
                        cap: int = DEFAULT_DEGREE_CAP) -> List[float]:
    """Refined boundary sup of ``|phi_n - 1|`` for ``n = 1..n_max``."""
    _check_iterate_degree(n_max, cap)
    maxima, args = kernels.orbit_max_distance(_boundary_grid(m), s.a, n_max)
    return [_refine(s.a, n, float(maxima[n]), int(args[n]), m) for n in range(1, n_max + 1)]


def _refine(a: complex, n: int, grid_max: float, k: int, m: int) -> float:
    step = 2.0 * math.pi / m
    theta = k * step
    _, best = golden_section_max(lambda t: _phi_n_distance(a, n, t), theta - step, theta + step)
    return max(grid_max, best)


def sampled_sup_distance(s: QuadraticSymbol, n: int, m: int = 4096,
                         cap: int = DEFAULT_DEGREE_CAP) -> float:
    """Estimate ``sup_{|z| < 1} |phi_n(z) - 1|`` from ``m`` boundary points.

    By the maximum principle the sup is attained on the circle.  Values of
    ``phi_n`` come from pointwise iteration rather than the degree-``2^n``
    coefficient vector, but the degree cap still applies.
    """
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    _check_iterate_degree(n, cap)
    maxima, args = kernels.orbit_max_distance(_boundary_grid(m), s.a, n)
    return _refine(s.a, n, float(maxima[n]), int(args[n]), m)


# ---------------------------------------------------------------------------
# interior case: conjugacies and invariant regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Conjugacy:
    """Affine map ``sigma(z) = 1 - z/a`` with ``sigma^{-1} phi sigma = g``."""

    a: complex

    def sigma(self, z):
        return 1.0 - z / self.a

    def sigma_inv(self, w):
        return self.a * (1.0 - w)

    def residual(self, z):
        a = self.a
        w = self.sigma(z)
        phi_w = a * w * w + (1.0 - 2.0 * a) * w + a
        return np.abs(self.sigma_inv(phi_w) - g_map(z))


def sigma_conjugacy(a: Number) -> Conjugacy:
    a = complex(a)
    if a == 0:
        raise DomainError("conjugacy needs a != 0")
    return Conjugacy(a)


def g_map(z):
    return z - z * z


def h_map(z):
    if np.any(np.asarray(z) == 1):
        raise PoleAtOne("h(z) = z + 1 + 1/(z - 1) has a pole at z = 1")
    return z + 1.0 + 1.0 / (z - 1.0)


class RegionKind(enum.Enum):
    PI_REGION = "PiRegion"
    CARDIOID = "Cardioid"
    HALF_PLANE_HA = "HalfPlaneHa"
    PARAMETER_DISK_A = "ParameterDiskA"
    DISK_DA = "DiskDa"


class Membership(enum.Enum):
    INSIDE = "Inside"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class Region:
    kind: RegionKind
    t: float = 0.0
    a: complex = 0j

    def margin(self, z):
        """Signed margin: positive inside, zero on the boundary curve."""
        z = np.asarray(z, dtype=np.complex128)
        x, y = z.real, z.imag
        if self.kind is RegionKind.PI_REGION:
            return y * y - 12.0 * (3.0 + self.t - x)
        if self.kind is RegionKind.CARDIOID:
            # 6r < 1 + cos(theta), scaled by r so the origin sits on the boundary
            r = np.abs(z)
            return r + x - 6.0 * r * r
        if self.kind is RegionKind.HALF_PLANE_HA:
            A, B = self.a.real, self.a.imag
            return 2.0 * (A * x - B * y) - 1.0
        if self.kind is RegionKind.PARAMETER_DISK_A:
            return 0.25 - np.abs(z - 0.25)
        return abs(self.a) - np.abs(z - self.a)


def pi_region(t: float = 0.0) -> Region:
    return Region(RegionKind.PI_REGION, t=float(t))


def cardioid() -> Region:
    return Region(RegionKind.CARDIOID)


def half_plane_ha(a: Number) -> Region:
    a = complex(a)
    if a == 0:
        raise DomainError("H_a needs a != 0")
    return Region(RegionKind.HALF_PLANE_HA, a=a)


def parameter_disk() -> Region:
    return Region(RegionKind.PARAMETER_DISK_A)


def disk_da(a: Number) -> Region:
    a = complex(a)
    if a == 0:
        raise DomainError("D_a needs a != 0")
    return Region(RegionKind.DISK_DA, a=a)


def region_contains(region: Region, z) -> Union[Membership, np.ndarray]:
    """Classify ``z`` against ``region`` with a 1e-12 boundary dead-band.

    Scalars give a :class:`Membership`; arrays give an object array of them.
    """
    m = region.margin(z)
    if np.ndim(m) == 0:
        m = float(m)
        if abs(m) <= REGION_DEADBAND:
            return Membership.BOUNDARY
        return Membership.INSIDE if m > 0 else Membership.OUTSIDE
    out = np.full(m.shape, Membership.OUTSIDE, dtype=object)
    out[m > REGION_DEADBAND] = Membership.INSIDE
    out[np.abs(m) <= REGION_DEADBAND] = Membership.BOUNDARY
    return out


def region_inside(region: Region, z) -> np.ndarray:
    """Boolean mask of strict (outside the dead-band) membership."""
    return np.asarray(region.margin(z)) > REGION_DEADBAND


@dataclass
class InvarianceReport:
    name: str
    samples: int
    violations: List[dict] = field(default_factory=list)
    max_residual: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations


def sample_pi_region(samples: int, rng: np.random.Generator) -> np.ndarray:
    """Random points strictly inside ``Pi``: both branches of the parabola, all x."""
    x = rng.uniform(-40.0, 40.0, samples)
    floor = 12.0 * np.maximum(3.0 - x, 0.0)
    y = np.sqrt(floor + rng.uniform(1e-3, 400.0, samples))
    y *= np.where(rng.random(samples) < 0.5, -1.0, 1.0)
    return x + 1j * y


def check_pi_invariance(samples: int, seed: int = 0, n_steps: int = 100,
                        points: Optional[Sequence[complex]] = None) -> InvarianceReport:
    """Check ``h(Pi + n/2 ...)``: ``h_n(z)`` lies in ``Pi + n/2`` with ``|h_n(z)| > sqrt(n)``."""
    if points is None:
        z = sample_pi_region(samples, np.random.default_rng(seed))
    else:
        z = np.asarray(points, dtype=np.complex128)
        z = z[region_inside(pi_region(0.0), z)]
    report = InvarianceReport("pi_invariance", int(z.size))
    w = z.copy()
    for n in range(1, n_steps + 1):
        w = h_map(w)
        bad_region = ~region_inside(pi_region(n / 2.0), w)
        bad_norm = ~(np.abs(w) > math.sqrt(n))
        for idx in np.flatnonzero(bad_region | bad_norm)[:50]:
            report.violations.append({
                "start": complex(z[idx]), "n": n, "value": complex(w[idx]),
                "region": bool(bad_region[idx]), "modulus": bool(bad_norm[idx]),
            })
    return report


def sample_parameter_disk(samples: int, rng: np.random.Generator) -> np.ndarray:
    rad = 0.25 * np.sqrt(rng.random(samples)) * (1.0 - 1e-9)
    ang = rng.uniform(-math.pi, math.pi, samples)
    return 0.25 + rad * np.exp(1j * ang)


def check_parameter_disk_invariance(samples: int, seed: int = 0,
                                    points: Optional[Sequence[complex]] = None) -> InvarianceReport:
    """Forward invariance of ``{|a - 1/4| < 1/4}`` under ``g`` via ``|g(a) - 1/4| = |a - 1/2|^2``."""
    if points is None:
        a = sample_parameter_disk(samples, np.random.default_rng(seed))
    else:
        a = np.asarray(points, dtype=np.complex128)
    report = InvarianceReport("parameter_disk_invariance", int(a.size))
    lhs = np.abs(g_map(a) - 0.25)
    rhs = np.abs(a - 0.5) ** 2
    resid = np.abs(lhs - rhs)
    report.max_residual = float(resid.max()) if a.size else 0.0
    bad = (resid > 1e-12) | ~(lhs < 0.25)
    for idx in np.flatnonzero(bad)[:50]:
        report.violations.append({"a": complex(a[idx]), "image_gap": float(lhs[idx]),
                                  "identity_residual": float(resid[idx])})
    return report


# ---------------------------------------------------------------------------
# escape-time grids
# ---------------------------------------------------------------------------

class CellStatus(enum.IntEnum):
    UNDECIDED = kernels.UNDECIDED
    CONVERGED_TO_ZERO = kernels.CONVERGED
    ESCAPED = kernels.ESCAPED


STATUS_LABELS = {
    CellStatus.UNDECIDED: "Undecided",
    CellStatus.CONVERGED_TO_ZERO: "ConvergedToZero",
    CellStatus.ESCAPED: "Escaped",
}


@dataclass
class EscapeGrid:
    """Per-cell classification of ``g``-orbits; arrays are indexed ``[row, col]`` = ``[y, x]``."""

    window: Tuple[float, float, float, float]
    resolution: Tuple[int, int]
    x: np.ndarray
    y: np.ndarray
    status: np.ndarray
    iterations: np.ndarray
    max_iter: int

    @property
    def points(self) -> np.ndarray:
        return self.x[None, :] + 1j * self.y[:, None]

    def counts(self) -> dict:
        return {STATUS_LABELS[s]: int(np.count_nonzero(self.status == s)) for s in CellStatus}


def cell_centers(lo: float, hi: float, n: int) -> np.ndarray:
    step = (hi - lo) / n
    return lo + (np.arange(n) + 0.5) * step


def escape_time_grid(window: Tuple[float, float, float, float] = (-1.0, 2.0, -1.5, 1.5),
                     resolution: Union[int, Tuple[int, int]] = 512,
                     max_iter: int = 10_000, attraction_radius: float = 1e-6,
                     escape_radius: float = 1e3, *, map: str = "g",
                     petal_capture: bool = True, backend: Optional[str] = None,
                     workers: Optional[int] = None) -> EscapeGrid:
    """Classify cell centres by the fate of their ``g``-orbit.

    A cell is ConvergedToZero once its orbit enters ``|z| < attraction_radius``
    or, with ``petal_capture``, the forward-invariant cardioid petal on which
    ``g_n -> 0`` uniformly.  It is Escaped once ``|z| > escape_radius`` and
    Undecided after ``max_iter`` steps otherwise.  Traversal is row-major over
    ascending ``y`` then ascending ``x``.
    """
    if map != "g":
        raise ValueError("only the map g(z) = z - z^2 is supported")
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    if not (1 <= nx <= 4096 and 1 <= ny <= 4096):
        raise ValueError("resolution must be between 1 and 4096 per axis")
    xmin, xmax, ymin, ymax = window
    if not (xmax > xmin and ymax > ymin):
        raise ValueError("window must have positive extent")
    x = cell_centers(xmin, xmax, nx)
    y = cell_centers(ymin, ymax, ny)
    pts = x[None, :] + 1j * y[:, None]
    status, its = kernels.escape_time(pts, max_iter, attraction_radius, escape_radius,
                                      petal_capture, backend=backend, workers=workers)
    return EscapeGrid((xmin, xmax, ymin, ymax), (nx, ny), x, y,
                      status.reshape(ny, nx), its.reshape(ny, nx), max_iter)
