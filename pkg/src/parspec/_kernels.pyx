# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops for escape-time grids and boundary orbit sweeps.

Semantics are defined by the pure-Python twin in ``_kernels_py``; both are
checked against each other in the test suite.
"""

from libc.math cimport sqrt

DEF CONVERGED = 1
DEF ESCAPED = 2


cdef inline bint _in_petal(double x, double y, double r2) noexcept nogil:
    # 6 r < 1 + cos(theta), multiplied through by r
    cdef double r = sqrt(r2)
    return 6.0 * r2 + 1e-12 < r + x


def escape_time(const double[::1] re, const double[::1] im,
                signed char[::1] status, long long[::1] iterations,
                long max_iter, double attraction_radius, double escape_radius,
                bint petal_capture):
    """Iterate ``g(z) = z - z^2`` from each start point, writing status and step count."""
    cdef Py_ssize_t k, n = re.shape[0]
    cdef long i
    cdef double x, y, t, r2
    cdef double att2 = attraction_radius * attraction_radius
    cdef double esc2 = escape_radius * escape_radius
    cdef signed char st
    with nogil:
        for k in range(n):
            x = re[k]
            y = im[k]
            st = 0
            i = 0
            while True:
                r2 = x * x + y * y
                if r2 < att2 or (petal_capture and _in_petal(x, y, r2)):
                    st = CONVERGED
                    break
                if r2 > esc2:
                    st = ESCAPED
                    break
                if i == max_iter:
                    break
                t = x - (x * x - y * y)
                y = y - 2.0 * x * y
                x = t
                i += 1
            status[k] = st
            iterations[k] = i


def orbit_max_distance(const double[::1] re, const double[::1] im,
                       double ar, double ai, long n_steps,
                       double[::1] out_max, long long[::1] out_arg):
    """Running ``max_j |phi_k(z_j) - 1|`` for ``k = 0..n_steps``.

    Works on ``d = w - 1`` through ``d <- d + a d^2``, which is exact algebra for
    ``phi(w) - 1`` and keeps precision near the fixed point.  Ties keep the
    lowest point index.
    """
    cdef Py_ssize_t j, m = re.shape[0]
    cdef long k
    cdef double dx, dy, sx, sy, dist2
    for k in range(n_steps + 1):
        out_max[k] = -1.0
        out_arg[k] = 0
    with nogil:
        for j in range(m):
            dx = re[j] - 1.0
            dy = im[j]
            for k in range(n_steps + 1):
                dist2 = dx * dx + dy * dy
                if dist2 > out_max[k]:
                    out_max[k] = dist2
                    out_arg[k] = j
                sx = dx * dx - dy * dy
                sy = 2.0 * dx * dy
                dx = dx + (ar * sx - ai * sy)
                dy = dy + (ar * sy + ai * sx)
        for k in range(n_steps + 1):
            out_max[k] = sqrt(out_max[k])
