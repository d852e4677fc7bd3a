"""Timing comparison of the two gather backends (compiled vs pure numpy).

Run:  python3 benchmarks/bench_interp.py
"""

import time

import numpy as np

from tcwavelets import interp


def bench(shape, m, order, repeats=3):
    rng = np.random.default_rng(0)
    values = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    pts = rng.uniform(2, min(shape) - 3, size=(m, len(shape)))

    results = {}
    for backend in ("cython", "python"):
        if backend == "cython" and interp.BACKEND != "cython":
            continue
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = interp.gather(values, pts, order=order, backend=backend)
            best = min(best, time.perf_counter() - t0)
        results[backend] = (best, out)
    return results


def main():
    print(f"active backend: {interp.BACKEND}")
    print(f"{'grid':>16} {'points':>8} {'order':>5} {'cython':>10} {'python':>10} "
          f"{'speedup':>8} {'max|diff|':>10}")
    cases = [
        ((256, 256), 100_000, 1),
        ((256, 256), 100_000, 3),
        ((256, 256), 100_000, 5),
        ((64, 64, 64), 50_000, 3),
        ((32, 32, 32, 32), 20_000, 3),
    ]
    for shape, m, order in cases:
        res = bench(shape, m, order)
        t_py, out_py = res["python"]
        if "cython" in res:
            t_cy, out_cy = res["cython"]
            diff = np.abs(out_cy - out_py).max()
            print(f"{str(shape):>16} {m:>8} {order:>5} {t_cy:>9.4f}s {t_py:>9.4f}s "
                  f"{t_py / t_cy:>7.1f}x {diff:>10.2e}")
        else:
            print(f"{str(shape):>16} {m:>8} {order:>5} {'-':>10} {t_py:>9.4f}s")


if __name__ == "__main__":
    main()
