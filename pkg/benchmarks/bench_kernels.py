"""Time the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py --resolution 512 --repeat 3
"""

import argparse
import json
import time

import numpy as np

from parspec import kernels
from parspec.dynamics import cell_centers


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--orbit-points", type=int, default=4096)
    p.add_argument("--orbit-steps", type=int, default=500)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--workers", type=int, default=1, help="threads for the grid kernel")
    p.add_argument("--json", action="store_true", help="print results as JSON")
    args = p.parse_args(argv)

    x = cell_centers(-1.0, 2.0, args.resolution)
    y = cell_centers(-1.5, 1.5, args.resolution)
    grid = (x[None, :] + 1j * y[:, None]).ravel()
    circle = np.exp(2j * np.pi * np.arange(args.orbit_points) / args.orbit_points)

    rows = []
    reference = {}
    for backend in kernels.available_backends():
        t_grid, esc = best_of(lambda: kernels.escape_time(grid, args.max_iter, 1e-6, 1e3,
                                                          backend=backend, workers=args.workers),
                              args.repeat)
        t_orbit, orb = best_of(lambda: kernels.orbit_max_distance(circle, 0.25 + 0.25j,
                                                                  args.orbit_steps, backend=backend),
                               args.repeat)
        if not reference:
            reference = {"esc": esc, "orb": orb}
        same = (np.array_equal(esc[0], reference["esc"][0])
                and np.array_equal(esc[1], reference["esc"][1])
                and np.array_equal(orb[0], reference["orb"][0]))
        rows.append({"backend": backend, "escape_grid_s": t_grid, "orbit_max_s": t_orbit,
                     "identical_to_first": bool(same)})

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"escape grid {args.resolution}^2, max_iter {args.max_iter}; "
          f"orbit {args.orbit_points} points x {args.orbit_steps} steps; best of {args.repeat}")
    print(f"{'backend':<8} {'grid [s]':>10} {'orbit [s]':>10}  identical")
    for r in rows:
        print(f"{r['backend']:<8} {r['escape_grid_s']:>10.4f} {r['orbit_max_s']:>10.4f}  {r['identical_to_first']}")
    if len(rows) == 2:
        print(f"speedup: grid x{rows[1]['escape_grid_s'] / rows[0]['escape_grid_s']:.1f}, "
              f"orbit x{rows[1]['orbit_max_s'] / rows[0]['orbit_max_s']:.1f}")


if __name__ == "__main__":
    main()
