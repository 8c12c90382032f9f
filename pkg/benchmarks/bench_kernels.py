"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--points 200000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from dlplab import kernels


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=200_000)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    rng = np.random.default_rng(0)
    pts2 = rng.uniform(-2, 2, (args.points, 2)) + np.array([0.0, 3.0])
    pts3 = rng.uniform(-2, 2, (args.points, 3)) + np.array([0.0, 0.0, 3.0])
    phi = 2 * np.pi * np.arange(32) / 32
    poly = np.column_stack([np.cos(phi), np.sin(phi), np.zeros(32)])

    py = kernels.python_backend
    ext = kernels._impl
    cases = {
        "angles_batch": (lambda m: m.angles_batch(0.0, 0.0, 1.0, 0.5, pts2)),
        "polygon_solid_angles_batch (32-gon)": (lambda m: m.polygon_solid_angles_batch(poly, pts3)),
    }
    print(f"active backend: {kernels.BACKEND}; points: {args.points}")
    print("kernel,python_s,active_s,speedup,max_abs_diff")
    for name, fn in cases.items():
        diff = float(np.max(np.abs(fn(py) - fn(ext))))
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        te = min(timeit.repeat(lambda: fn(ext), number=1, repeat=args.repeat))
        print(f"{name},{tp:.4f},{te:.4f},{tp / te:.2f},{diff:.1e}")


if __name__ == "__main__":
    main()
