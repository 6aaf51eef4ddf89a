"""Backend selection for the hot loops.

The compiled extension ``parspec._kernels`` is used when it imports; otherwise
the NumPy twin in ``parspec._kernels_py`` takes over.  Set
``PARSPEC_BACKEND=python`` to force the fallback.  ``PARSPEC_THREADS`` caps the
number of worker threads used to split grids into row blocks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from types import ModuleType
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

from . import _kernels_py

try:  # pragma: no cover - depends on build
    from . import _kernels as _native
except ImportError:  # pragma: no cover
    _native = None

T = TypeVar("T")

CONVERGED = _kernels_py.CONVERGED
ESCAPED = _kernels_py.ESCAPED
UNDECIDED = 0


def available_backends() -> List[str]:
    return ["native", "python"] if _native is not None else ["python"]


def get_backend(name: Optional[str] = None) -> ModuleType:
    if name is None:
        name = os.environ.get("PARSPEC_BACKEND", "native" if _native is not None else "python")
    if name == "native":
        if _native is None:
            raise RuntimeError("compiled kernels are not built; reinstall with Cython available")
        return _native
    if name == "python":
        return _kernels_py
    raise ValueError(f"unknown backend {name!r}")


def backend_name() -> str:
    return "native" if get_backend() is _native else "python"


def worker_count() -> int:
    env = os.environ.get("PARSPEC_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def map_blocks(func: Callable[[int, int], T], n_items: int, workers: Optional[int] = None) -> List[T]:
    """Apply ``func(start, stop)`` over contiguous blocks; results come back in block order."""
    workers = worker_count() if workers is None else max(1, workers)
    if n_items == 0:
        return []
    n_blocks = min(n_items, workers * 4) if workers > 1 else 1
    bounds = np.linspace(0, n_items, n_blocks + 1).astype(int)
    spans: Sequence = list(zip(bounds[:-1], bounds[1:]))
    if workers == 1:
        return [func(int(a), int(b)) for a, b in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ab: func(int(ab[0]), int(ab[1])), spans))


def escape_time(points: np.ndarray, max_iter: int, attraction_radius: float,
                escape_radius: float, petal_capture: bool = True,
                backend: Optional[str] = None, workers: Optional[int] = None):
    """Status codes and iteration counts for ``g(z) = z - z^2`` from ``points``."""
    mod = get_backend(backend)
    pts = np.ascontiguousarray(np.ravel(points), dtype=np.complex128)
    re = np.ascontiguousarray(pts.real)
    im = np.ascontiguousarray(pts.imag)
    status = np.zeros(pts.size, dtype=np.int8)
    iterations = np.zeros(pts.size, dtype=np.int64)

    def run(a: int, b: int) -> None:
        mod.escape_time(re[a:b], im[a:b], status[a:b], iterations[a:b], int(max_iter),
                        float(attraction_radius), float(escape_radius), bool(petal_capture))

    map_blocks(run, pts.size, workers)
    return status, iterations


def orbit_max_distance(points: np.ndarray, a: complex, n_steps: int,
                       backend: Optional[str] = None):
    """Per-step maximum of ``|phi_k(z) - 1|`` over ``points`` and the lowest argmax."""
    mod = get_backend(backend)
    pts = np.ascontiguousarray(np.ravel(points), dtype=np.complex128)
    out_max = np.zeros(n_steps + 1, dtype=np.float64)
    out_arg = np.zeros(n_steps + 1, dtype=np.int64)
    a = complex(a)
    mod.orbit_max_distance(np.ascontiguousarray(pts.real), np.ascontiguousarray(pts.imag),
                           a.real, a.imag, int(n_steps), out_max, out_arg)
    return out_max, out_arg
