"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--max-bound 5]

Both backends are checked to return identical results before timing is
reported.  The numba timings exclude the first (compiling) call.
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from golaypq import _accel
from golaypq.search import _orthonormal_poly_basis
from golaypq.seqdesign import difference_basis

FLAG = "GOLAYPQ_DISABLE_NUMBA"


def _best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def _both(fn, repeat):
    os.environ.pop(FLAG, None)
    fn()  # compile
    t_nb, r_nb = _best_of(fn, repeat)
    os.environ[FLAG] = "1"
    try:
        t_np, r_np = _best_of(fn, max(1, repeat // 2))
    finally:
        os.environ.pop(FLAG, None)
    return t_nb, t_np, r_nb, r_np


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-bound", type=int, default=5)
    args = ap.parse_args(argv)

    print(f"{'kernel':<34}{'numba s':>10}{'numpy s':>10}{'speedup':>9}  same")
    basis = np.array(difference_basis(16, 8), dtype=np.int64)
    for bound in range(2, args.max_bound + 1):
        t_nb, t_np, a, b = _both(lambda: _accel.lattice_search(basis, bound), args.repeat)
        print(f"{f'lattice N=16 M=8 bound={bound}':<34}{t_nb:>10.3f}{t_np:>10.3f}{t_np / t_nb:>9.1f}  {a == b}")
    for N in (16, 18, 20):
        onb = _orthonormal_poly_basis(N, 8)
        t_nb, t_np, a, b = _both(lambda: _accel.pattern_bounds(onb), args.repeat)
        same = bool(np.allclose(a, b, atol=1e-9))
        print(f"{f'pattern bounds N={N} M=8':<34}{t_nb:>10.3f}{t_np:>10.3f}{t_np / t_nb:>9.1f}  {same}")


if __name__ == "__main__":
    main()
