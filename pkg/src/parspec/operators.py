"""Truncated matrices of composition, Toeplitz and weighted composition operators.

Matrices are compressions to ``span{1, z, ..., z^{n-1}}`` in the monomial basis,
which is orthonormal in H^2.  Entry ``(i, j)`` of a compression is the
coefficient of ``z^i`` in the image of ``z^j``.
"""

from __future__ import annotations

import csv
import enum
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DegreeOverflow, DimensionMismatch
from .poly import DEFAULT_DEGREE_CAP, ComplexPolynomial, QuadraticSymbol, compose, evaluate

MAX_DIMENSION = 4096

PolyLike = Union[ComplexPolynomial, QuadraticSymbol, list, tuple, np.ndarray]


class Provenance(enum.Enum):
    COMPOSITION = "Composition"
    TOEPLITZ = "Toeplitz"
    WEIGHTED = "Weighted"
    PRODUCT = "Product"
    RAW = "Raw"


@dataclass(frozen=True, eq=False)
class TruncatedMatrix:
    entries: np.ndarray
    provenance: Provenance = Provenance.RAW

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionMismatch(f"expected a nonempty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _as_poly(p: PolyLike) -> ComplexPolynomial:
    if isinstance(p, QuadraticSymbol):
        return p.poly
    if isinstance(p, ComplexPolynomial):
        return p
    return ComplexPolynomial(p)


def _as_array(A) -> np.ndarray:
    return A.entries if isinstance(A, TruncatedMatrix) else np.asarray(A, dtype=np.complex128)


def _check_dimension(n: int) -> None:
    if not 1 <= n <= MAX_DIMENSION:
        raise ValueError(f"dimension {n} outside [1, {MAX_DIMENSION}]")


def _power_columns(first: np.ndarray, phi: ComplexPolynomial, n: int, cap: int) -> np.ndarray:
    """Columns ``first * phi^j`` truncated to ``n`` rows, for ``j < n``.

    Truncating each intermediate product is exact for the leading rows because
    the low coefficients of a product depend only on the low coefficients of
    its factors.
    """
    if phi.degree * (n - 1) + len(first) - 1 > cap:
        raise DegreeOverflow(f"phi^{n - 1} exceeds degree cap {cap}")
    M = np.zeros((n, n), dtype=np.complex128)
    col = np.zeros(n, dtype=np.complex128)
    k = min(n, first.size)
    col[:k] = first[:k]
    c = phi.coeffs
    for j in range(n):
        M[:, j] = col
        col = np.convolve(col, c)[:n]
    return M


def composition_matrix(phi: PolyLike, n: int, *, cap: int = DEFAULT_DEGREE_CAP) -> TruncatedMatrix:
    _check_dimension(n)
    M = _power_columns(np.ones(1, dtype=np.complex128), _as_poly(phi), n, cap)
    return TruncatedMatrix(M, Provenance.COMPOSITION)


def toeplitz_matrix(psi: PolyLike, n: int) -> TruncatedMatrix:
    """Lower-triangular Toeplitz matrix with entries ``psi_{i-j}``."""
    _check_dimension(n)
    c = _as_poly(psi).truncated(n)
    i, j = np.indices((n, n))
    M = np.where(i >= j, c[np.clip(i - j, 0, n - 1)], 0)
    return TruncatedMatrix(M, Provenance.TOEPLITZ)


def weighted_matrix(psi: PolyLike, phi: PolyLike, n: int, *, cap: int = DEFAULT_DEGREE_CAP) -> TruncatedMatrix:
    """Compression of ``f -> psi (f o phi)`` built from the exact products ``psi phi^j``."""
    _check_dimension(n)
    M = _power_columns(_as_poly(psi).coeffs, _as_poly(phi), n, cap)
    return TruncatedMatrix(M, Provenance.WEIGHTED)


def matrix_multiply(A, B) -> TruncatedMatrix:
    a, b = _as_array(A), _as_array(B)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return TruncatedMatrix(a @ b, Provenance.PRODUCT)


def subtract_scaled_identity(A, lam: complex) -> TruncatedMatrix:
    a = _as_array(A)
    return TruncatedMatrix(a - complex(lam) * np.eye(a.shape[0]), Provenance.RAW)


def operator_norm_upper(A) -> float:
    """Frobenius norm, an upper bound for the spectral norm."""
    return float(np.linalg.norm(_as_array(A), "fro"))


def special_case_factorization_check(n: int) -> float:
    """Frobenius defect of ``C_phi = C_{z^2} C_f`` for ``phi = (z^2 + 1)/2``, ``f = (z + 1)/2``.

    ``C_f`` never raises degree, so the truncated product is exact.
    """
    phi = composition_matrix([0.5, 0, 0.5], n)
    sq = composition_matrix([0, 0, 1], n)
    f = composition_matrix([0.5, 0.5], n)
    return operator_norm_upper(phi.entries - matrix_multiply(sq, f).entries)


def special_case_inner_square() -> ComplexPolynomial:
    """Symbol of the swapped product ``C_f C_{z^2}``, namely ``z^2 o f = f^2``.

    Here ``f^2`` is the pointwise square ``((z + 1)/2)^2``, not ``f o f``.
    """
    f = ComplexPolynomial([0.5, 0.5])
    return compose(ComplexPolynomial([0, 0, 1]), f)


def psi_at_one(psi: PolyLike) -> complex:
    return complex(evaluate(_as_poly(psi), 1.0))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_HEADER = struct.Struct("<Q")


def to_bytes(A) -> bytes:
    """Dimension as little-endian uint64, then row-major ``<c16`` (re, im interleaved)."""
    a = _as_array(A)
    return _HEADER.pack(a.shape[0]) + np.ascontiguousarray(a, dtype="<c16").tobytes()


def from_bytes(data: bytes) -> TruncatedMatrix:
    if len(data) < _HEADER.size:
        raise ValueError("truncated matrix header")
    (n,) = _HEADER.unpack_from(data)
    body = data[_HEADER.size:]
    if len(body) != 16 * n * n:
        raise ValueError(f"expected {16 * n * n} payload bytes for n = {n}, got {len(body)}")
    return TruncatedMatrix(np.frombuffer(body, dtype="<c16").reshape(n, n).astype(np.complex128))


def save_binary(A, path: Union[str, Path]) -> None:
    Path(path).write_bytes(to_bytes(A))


def load_binary(path: Union[str, Path]) -> TruncatedMatrix:
    return from_bytes(Path(path).read_bytes())


def save_csv(A, path: Union[str, Path]) -> None:
    """One row per entry: ``row, col, re, im``."""
    a = _as_array(A)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                w.writerow([i, j, repr(float(a[i, j].real)), repr(float(a[i, j].imag))])


def load_csv(path: Union[str, Path]) -> TruncatedMatrix:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    n = int(round(len(rows) ** 0.5))
    M = np.zeros((n, n), dtype=np.complex128)
    for r in rows:
        M[int(r["row"]), int(r["col"])] = complex(float(r["re"]), float(r["im"]))
    return TruncatedMatrix(M)
