#!/usr/bin/env python3
"""Compare the compiled geometric kernels against the pure-numpy reference.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--reps 5]

The same arrays go through both implementations; results are checked for
agreement before timings are reported.
"""

import argparse
import time

import numpy as np

from lensfold._kernels import _ref

try:
    from lensfold._kernels import _core
except ImportError:
    _core = None


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_tri_tri(m, reps, rng):
    a = rng.uniform(-1.0, 1.0, size=(m, 9))
    b = a + rng.uniform(-0.3, 0.3, size=(m, 9))
    shrink = 1e-7
    out_ref = _ref.tri_tri_overlap(a, b, shrink)
    rows = [("tri_tri_overlap", m, "python",
             _time(lambda: _ref.tri_tri_overlap(a, b, shrink), reps))]
    if _core is not None:
        out_c = _core.tri_tri_overlap(a, b, shrink)
        assert np.array_equal(out_ref, out_c), "backend disagreement"
        rows.append(("tri_tri_overlap", m, "compiled",
                     _time(lambda: _core.tri_tri_overlap(a, b, shrink), reps)))
    return rows


def bench_segments(m, reps, rng):
    t = np.linspace(0.0, 1.0, 513)
    poly = np.stack([t, 0.3 * np.sin(np.pi * t)], axis=1)
    segs = rng.uniform(0.0, 1.0, size=(m, 4))
    tol = 1e-9
    out_ref = _ref.segments_cross_polyline(segs, poly, tol)
    rows = [("segments_cross_polyline", m, "python",
             _time(lambda: _ref.segments_cross_polyline(segs, poly, tol),
                   reps))]
    if _core is not None:
        out_c = _core.segments_cross_polyline(segs, poly, tol)
        assert np.array_equal(out_ref, out_c), "backend disagreement"
        rows.append(("segments_cross_polyline", m, "compiled",
                     _time(lambda: _core.segments_cross_polyline(segs, poly,
                                                                 tol), reps)))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    if _core is None:
        print("compiled backend not built; timing the reference only")
    rows = []
    for m in sizes:
        rows += bench_tri_tri(m, args.reps, rng)
        rows += bench_segments(m, args.reps, rng)

    print(f"{'kernel':26s} {'m':>8s} {'backend':>9s} {'best [ms]':>10s} {'Melem/s':>9s}")
    speedups = {}
    for name, m, backend, sec in rows:
        print(f"{name:26s} {m:8d} {backend:>9s} {1e3 * sec:10.3f} "
              f"{m / sec / 1e6:9.2f}")
        speedups.setdefault((name, m), {})[backend] = sec
    for (name, m), t in sorted(speedups.items()):
        if "compiled" in t and "python" in t:
            print(f"speedup {name} m={m}: {t['python'] / t['compiled']:.2f}x")


if __name__ == "__main__":
    main()
