"""NumPy implementations of the hot loops; reference semantics for ``_kernels``."""

import numpy as np

CONVERGED = 1
ESCAPED = 2


def escape_time(re, im, status, iterations, max_iter, attraction_radius,
                escape_radius, petal_capture):
    x = np.array(re, dtype=np.float64)
    y = np.array(im, dtype=np.float64)
    n = x.size
    st = np.zeros(n, dtype=np.int8)
    its = np.full(n, max_iter, dtype=np.int64)
    active = np.arange(n)
    att2 = attraction_radius * attraction_radius
    esc2 = escape_radius * escape_radius
    i = 0
    while active.size:
        xa, ya = x[active], y[active]
        r2 = xa * xa + ya * ya
        conv = r2 < att2
        if petal_capture:
            conv |= 6.0 * r2 + 1e-12 < np.sqrt(r2) + xa
        esc = ~conv & (r2 > esc2)
        done = conv | esc
        st[active[conv]] = CONVERGED
        st[active[esc]] = ESCAPED
        its[active[done]] = i
        if i == max_iter:
            break
        active = active[~done]
        xa, ya = xa[~done], ya[~done]
        x[active] = xa - (xa * xa - ya * ya)
        y[active] = ya - 2.0 * xa * ya
        i += 1
    status[:] = st
    iterations[:] = its


def orbit_max_distance(re, im, ar, ai, n_steps, out_max, out_arg):
    dx = np.asarray(re, dtype=np.float64) - 1.0
    dy = np.array(im, dtype=np.float64)
    for k in range(n_steps + 1):
        dist2 = dx * dx + dy * dy
        j = int(np.argmax(dist2))
        out_max[k] = np.sqrt(dist2[j])
        out_arg[k] = j
        sx = dx * dx - dy * dy
        sy = 2.0 * dx * dy
        dx, dy = dx + (ar * sx - ai * sy), dy + (ar * sy + ai * sx)
