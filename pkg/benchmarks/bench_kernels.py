"""Times the compiled scoring kernels against the pure-Python fallback.

Run from the repo root after installing the package:

    python3 benchmarks/bench_kernels.py [--repeats N]

Workload sizes mirror real use: summaries and references are a few
hundred tokens, sources up to ~1k, and the overlap kernel sees sorted
n-gram id arrays from texts of those lengths.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from podsum import _kernels_py

try:
    from podsum import _kernels
except ImportError:
    _kernels = None

LCS_CASES = (
    ("lcs  60x80   (summary vs reference)", 60, 80),
    ("lcs 250x120  (long summary)", 250, 120),
    ("lcs 1024x100 (source vs reference)", 1024, 100),
)
OVERLAP_CASES = (
    ("overlap 200x200", 200, 200),
    ("overlap 2000x2000", 2000, 2000),
)


def _best_of(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=20,
                        help="timing repeats per case; best run wins")
    parser.add_argument("--vocab", type=int, default=500,
                        help="id range, controls match density")
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not built; timing the fallback only")
    rng = np.random.default_rng(0)

    rows = []
    for name, n, m in LCS_CASES:
        a = rng.integers(0, args.vocab, size=n).astype(np.int64)
        b = rng.integers(0, args.vocab, size=m).astype(np.int64)
        rows.append((name, _kernels_py.lcs_length, a, b))
    for name, n, m in OVERLAP_CASES:
        a = np.sort(rng.integers(0, args.vocab, size=n)).astype(np.int64)
        b = np.sort(rng.integers(0, args.vocab, size=m)).astype(np.int64)
        rows.append((name, _kernels_py.sorted_overlap, a, b))

    print(f"{'case':<38} {'python':>10} {'cython':>10} {'speedup':>9}")
    for name, py_fn, a, b in rows:
        t_py = _best_of(py_fn, (a, b), args.repeats)
        if _kernels is not None:
            cy_fn = getattr(_kernels, py_fn.__name__)
            assert cy_fn(a, b) == py_fn(a, b), name
            t_cy = _best_of(cy_fn, (a, b), args.repeats)
            print(f"{name:<38} {t_py * 1e6:>8.0f}us {t_cy * 1e6:>8.0f}us "
                  f"{t_py / t_cy:>8.1f}x")
        else:
            print(f"{name:<38} {t_py * 1e6:>8.0f}us {'-':>10} {'-':>9}")


if __name__ == "__main__":
    main()
