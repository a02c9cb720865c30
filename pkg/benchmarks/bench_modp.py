"""Timing comparison of the two mod-p row-reduction backends.

Runs the numba kernel and the pure-numpy fallback on the same random
matrices, asserts bit-identical output, and prints a small table.  Invoke
as a script:

    python3 benchmarks/bench_modp.py
"""
import os
import time

import numpy as np

os.environ.pop("PDCDGA_PURE_NUMPY", None)

from pdcdga import _modp  # noqa: E402

SIZES = (50, 100, 200, 400)
P = 1_000_003
REPS = 5


def _time(fn, mat) -> float:
    best = float("inf")
    for _ in range(REPS):
        t0 = time.perf_counter()
        fn(mat, P)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    if not _modp.use_accelerated():
        raise SystemExit("numba backend unavailable; nothing to compare")
    rng = np.random.default_rng(20240817)
    # trigger the one-time compile outside the timed region
    _modp.rref_mod_p(rng.integers(0, P, size=(8, 8)), P)

    print("%8s %14s %14s %8s" % ("size", "numba (s)", "numpy (s)", "ratio"))
    for size in SIZES:
        mat = rng.integers(0, P, size=(size, size + 7))
        fast = _time(_modp.rref_mod_p, mat)
        r1, p1 = _modp.rref_mod_p(mat, P)

        os.environ[_modp.ENV_FLAG] = "1"
        try:
            slow = _time(_modp.rref_mod_p, mat)
            r2, p2 = _modp.rref_mod_p(mat, P)
        finally:
            del os.environ[_modp.ENV_FLAG]

        assert p1 == p2 and (r1 == r2).all(), "backends disagree"
        print("%8d %14.6f %14.6f %7.1fx" % (size, fast, slow, slow / fast))


if __name__ == "__main__":
    main()
