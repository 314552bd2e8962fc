"""Time the compiled and pure-Python integrators on the same trajectory.

    python benchmarks/bench_kernel.py [--zeros 20] [--repeat 3]
"""
import argparse
import time

import numpy as np

from pqspec import kernel
from pqspec.config import ODE_ATOL, ODE_RTOL


def trajectory(backend, zeros, p=3.0, q=2.0):
    return kernel.integrate(0, p, q, 1.0, 0.0, (0.0, 1.0, 0.0), 1e6, zeros,
                            ODE_RTOL, ODE_ATOL, 1e-3, 10 ** 7, backend=backend)


def best_time(backend, zeros, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        sol = trajectory(backend, zeros)
        times.append(time.perf_counter() - t0)
    return min(times), sol


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--zeros", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    results = {}
    for name in sorted(kernel.BACKENDS):
        t, sol = best_time(name, args.zeros, args.repeat)
        results[name] = (t, sol)
        print(f"{name:>7}: {t * 1e3:9.2f} ms  {len(sol.xs):7d} steps")
    if "cython" in results:
        (tc, a), (tp, b) = results["cython"], results["python"]
        same = np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)
        print(f"speedup {tp / tc:.1f}x, identical output: {same}")
    else:
        print("compiled kernel not built; only the Python backend ran")


if __name__ == "__main__":
    main()
