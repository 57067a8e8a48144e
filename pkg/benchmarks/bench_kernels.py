#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Numba functions are warmed up first so compilation is excluded. Each kernel
is checked for agreement between the two paths before it is timed.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]
"""

import argparse
import json
import time

import numpy as np

from grassmannian import _kernels
from grassmannian.generators import circle_points, ellipse_points


def _cases(rng):
    m = 512
    verts = ellipse_points(m, 1.2, 0.9)
    t = np.linspace(0, 2 * np.pi, m, endpoint=False)
    normals = np.stack([np.cos(t) * 0.9, np.sin(t) * 1.2], axis=-1)
    normals /= np.linalg.norm(normals, axis=-1, keepdims=True)
    coefs = (rng.normal(size=(m // 2 + 1, 2)) + 1j * rng.normal(size=(m // 2 + 1, 2))) / m
    theta = rng.uniform(0, 2 * np.pi, 2000)
    pts = circle_points(2000, radius=1.05)
    return {
        "fourier_eval": ("fourier_eval", (coefs, theta, 1)),
        "fourier_eval012": ("fourier_eval012", (coefs, theta)),
        "polyline_project": ("polyline_project", (pts, verts)),
        "reach_estimate": ("reach_estimate", (verts, normals[:, :, None])),
        "min_separation": ("min_separation", (verts,)),
        "first_crossing_2d": ("first_crossing_2d", (verts,)),
    }


def _time(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _agree(a, b):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    return max(float(np.max(np.abs(np.asarray(x, float) - np.asarray(y, float)))) for x, y in zip(a, b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if _kernels.numba_impl is None:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    rows = []
    for name, (attr, fargs) in _cases(rng).items():
        nb = getattr(_kernels.numba_impl, attr)
        npf = getattr(_kernels.numpy_impl, attr)
        nb(*fargs)  # warm-up / compile
        gap = _agree(nb(*fargs), npf(*fargs))
        t_nb = _time(nb, fargs, args.repeat)
        t_np = _time(npf, fargs, args.repeat)
        rows.append({"kernel": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb, "max_gap": gap})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'kernel':<20}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}{'max gap':>12}")
    for r in rows:
        print(f"{r['kernel']:<20}{1e3 * r['numba_s']:>12.3f}{1e3 * r['numpy_s']:>12.3f}"
              f"{r['speedup']:>10.1f}{r['max_gap']:>12.1e}")


if __name__ == "__main__":
    main()
