"""Compare the compiled echelon kernel against the pure-Python fallback.

Runs rank and nullspace over seeded random sparse integer matrices of
growing size and prints one timing row per case.  Usage:

    python3 benchmarks/bench_kernel.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time

from bottsam._kernel import _echelon_py

try:
    from bottsam._kernel import _echelon_cy
except ImportError:
    _echelon_cy = None


def random_rows(rng, nrows, ncols, density):
    rows = []
    for _ in range(nrows):
        row = {}
        for j in range(ncols):
            if rng.random() < density:
                value = rng.randint(-9, 9)
                if value:
                    row[j] = value
        rows.append(row)
    return rows


def timed(func, rows, repeat):
    copies = [[dict(r) for r in rows] for _ in range(repeat)]
    start = time.perf_counter()
    for copy in copies:
        func(copy)
    return (time.perf_counter() - start) / repeat


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions per case (default 5)")
    args = parser.parse_args()

    rng = random.Random(20260819)
    cases = [(40, 30, 0.4), (80, 60, 0.3), (150, 120, 0.2), (250, 200, 0.15)]
    header = f"{'case':>12} {'op':>10} {'python':>10} {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for nrows, ncols, density in cases:
        rows = random_rows(rng, nrows, ncols, density)
        for label, py_func, cy_func in (
                ("rank", _echelon_py.rank,
                 _echelon_cy.rank if _echelon_cy else None),
                ("nullspace", lambda r: _echelon_py.nullspace(r, ncols),
                 (lambda r: _echelon_cy.nullspace(r, ncols))
                 if _echelon_cy else None)):
            name = f"{nrows}x{ncols}"
            py_time = timed(py_func, rows, args.repeat)
            if cy_func is None:
                print(f"{name:>12} {label:>10} {py_time:>10.4f} "
                      f"{'n/a':>10} {'n/a':>8}")
                continue
            cy_time = timed(cy_func, rows, args.repeat)
            ratio = py_time / cy_time if cy_time else float("inf")
            print(f"{name:>12} {label:>10} {py_time:>10.4f} "
                  f"{cy_time:>10.4f} {ratio:>7.2f}x")
    if _echelon_cy is None:
        print("\ncompiled kernel not built; showing pure-Python times only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
