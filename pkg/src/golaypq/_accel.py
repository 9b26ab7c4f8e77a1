"""Hot integer/float kernels for the sequence searches.

Each kernel has a numba ``@njit`` implementation and a vectorised numpy
fallback with identical results.  The numpy path is selected when numba is
missing or when ``GOLAYPQ_DISABLE_NUMBA`` is set to a truthy value.
``GOLAY_THREADS`` caps the number of numba worker threads.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

_FALSY = ("", "0", "false", "no", "off")

try:
    import numba
    from numba import njit, prange

    NUMBA_AVAILABLE = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    NUMBA_AVAILABLE = False


def numba_enabled() -> bool:
    """True when the numba kernels are in use (re-read from the env each call)."""
    flag = os.environ.get("GOLAYPQ_DISABLE_NUMBA", "").strip().lower()
    return NUMBA_AVAILABLE and flag in _FALSY


def _apply_thread_cap() -> None:
    cap = os.environ.get("GOLAY_THREADS")
    if not cap or not NUMBA_AVAILABLE:
        return
    try:
        n = int(cap)
    except ValueError:
        raise ValueError(f"GOLAY_THREADS must be an integer, got {cap!r}") from None
    if n < 1:
        raise ValueError("GOLAY_THREADS must be >= 1")
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------------------
# Coefficient-lattice scan
#
# For a fixed leading coefficient ``first`` the scan walks every
# u in {first} x [-bound, bound]^(D-1), keeps c = u @ basis up to date with
# one row update per odometer step, and tracks the feasible c (no zero
# entries) with the largest (sum|c|)^2 / sum c^2.  Ratios are compared by
# exact int64 cross-multiplication; ties go to the lexicographically
# smallest |c| / gcd(c).  The returned c is reduced by its gcd.
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _gcd_abs(c):
        g = 0
        for v in c:
            a = abs(v)
            while a:
                g, a = a, g % a
        return g

    @njit(cache=True)
    def _lattice_scan_nb(basis, bound, first):
        D, N = basis.shape
        u = np.empty(D, np.int64)
        u[0] = first
        for s in range(1, D):
            u[s] = -bound
        c = np.zeros(N, np.int64)
        for s in range(D):
            for n in range(N):
                c[n] += u[s] * basis[s, n]
        best = np.zeros(N, np.int64)
        bs1 = np.int64(0)
        bs2 = np.int64(1)
        found = False
        while True:
            ok = True
            s1 = np.int64(0)
            s2 = np.int64(0)
            for n in range(N):
                v = c[n]
                if v == 0:
                    ok = False
                    break
                a = abs(v)
                s1 += a
                s2 += a * a
            if ok:
                lhs = s1 * s1 * bs2
                rhs = bs1 * bs1 * s2
                if not found or lhs > rhs:
                    g = _gcd_abs(c)
                    for n in range(N):
                        best[n] = c[n] // g
                    bs1 = s1 // g
                    bs2 = s2 // (g * g)
                    found = True
                elif lhs == rhs:
                    g = _gcd_abs(c)
                    for n in range(N):
                        a = abs(c[n])
                        b = abs(best[n]) * g
                        if a < b:
                            for m in range(N):
                                best[m] = c[m] // g
                            break
                        if a > b:
                            break
            # odometer over u[1:]
            i = D - 1
            while i >= 1:
                if u[i] < bound:
                    u[i] += 1
                    for n in range(N):
                        c[n] += basis[i, n]
                    break
                for n in range(N):
                    c[n] -= 2 * bound * basis[i, n]
                u[i] = -bound
                i -= 1
            if i < 1:
                break
        return found, bs1, bs2, best

    @njit(parallel=True, cache=True)
    def _lattice_all_nb(basis, bound):
        N = basis.shape[1]
        found = np.zeros(bound, np.bool_)
        s1 = np.zeros(bound, np.int64)
        s2 = np.ones(bound, np.int64)
        cs = np.zeros((bound, N), np.int64)
        for i in prange(bound):
            f, a, b, c = _lattice_scan_nb(basis, bound, i + 1)
            found[i] = f
            s1[i] = a
            s2[i] = b
            cs[i, :] = c
        return found, s1, s2, cs

    @njit(cache=True)
    def _pattern_bounds_nb(onb):
        # Gray-code walk over sign patterns with s[0] = +1; pattern index is
        # the bit mask of negative entries among s[1:].
        N, K = onb.shape
        P = 1 << (N - 1)
        out = np.empty(P, np.float64)
        proj = np.zeros(K, np.float64)
        for n in range(N):
            for j in range(K):
                proj[j] += onb[n, j]
        mask = 0
        for step in range(P):
            if step > 0:
                # bit that flips between gray(step-1) and gray(step)
                bit = 0
                t = step
                while (t & 1) == 0:
                    t >>= 1
                    bit += 1
                n = bit + 1
                if (mask >> bit) & 1:
                    for j in range(K):
                        proj[j] += 2.0 * onb[n, j]
                else:
                    for j in range(K):
                        proj[j] -= 2.0 * onb[n, j]
                mask ^= 1 << bit
            acc = 0.0
            for j in range(K):
                acc += proj[j] * proj[j]
            out[mask] = N - acc
        return out


def _better(s1, s2, c, best):
    """Exact comparison of a candidate (s1, s2, reduced c) against ``best``."""
    if best is None:
        return True
    bs1, bs2, bc = best
    lhs, rhs = s1 * s1 * bs2, bs1 * bs1 * s2
    if lhs != rhs:
        return lhs > rhs
    return tuple(abs(v) for v in c) < tuple(abs(v) for v in bc)


def _reduce(c):
    g = int(np.gcd.reduce(np.abs(c)))
    c = [int(v) // g for v in c]
    a = [abs(v) for v in c]
    return sum(a), sum(v * v for v in a), c


def _lattice_scan_np(basis, bound, first, block=4):
    D, N = basis.shape
    base = first * basis[0]
    rest = list(range(1, D))
    tail, head = rest[-block:], rest[:-block] if len(rest) > block else []
    span = np.arange(-bound, bound + 1, dtype=np.int64)
    if tail:
        grid = np.array(list(itertools.product(span, repeat=len(tail))), dtype=np.int64)
        tail_c = grid @ basis[tail]
    else:
        tail_c = np.zeros((1, N), np.int64)
    best = None
    for hu in itertools.product(span, repeat=len(head)):
        c = base + tail_c
        if head:
            c = c + np.asarray(hu, np.int64) @ basis[head]
        ok = np.all(c != 0, axis=1)
        if not ok.any():
            continue
        c = c[ok]
        a = np.abs(c)
        s1 = a.sum(axis=1)
        s2 = (a * a).sum(axis=1)
        ratio = s1.astype(np.float64) ** 2 / s2
        top = ratio.max()
        for idx in np.flatnonzero(ratio >= top * (1.0 - 1e-12)):
            r1, r2, rc = _reduce(c[idx])
            if _better(r1, r2, rc, best):
                best = (r1, r2, rc)
    return best


def lattice_search(basis: np.ndarray, bound: int):
    """Best reduced integer combination of ``basis`` rows with coefficients
    in ``[-bound, bound]`` and a strictly positive leading coefficient.

    Returns ``(s1, s2, c)`` with ``c`` a list of python ints, or ``None`` when
    every combination has a zero entry.
    """
    basis = np.ascontiguousarray(basis, dtype=np.int64)
    if numba_enabled():
        _apply_thread_cap()
        found, s1, s2, cs = _lattice_all_nb(basis, int(bound))
        cands = [
            (int(s1[i]), int(s2[i]), [int(v) for v in cs[i]])
            for i in range(int(bound))
            if found[i]
        ]
    else:
        cands = [r for f in range(1, bound + 1) if (r := _lattice_scan_np(basis, bound, f))]
    best = None
    for cand in cands:
        if _better(*cand, best):
            best = cand
    return best


def pattern_bounds(onb: np.ndarray, chunk_bits: int = 16) -> np.ndarray:
    """``N - |onb.T @ s|^2`` for every sign pattern ``s`` with ``s[0] = +1``.

    Entry ``i`` corresponds to the pattern whose entries ``s[1 + b]`` are
    negative exactly for the set bits ``b`` of ``i``.
    """
    onb = np.ascontiguousarray(onb, dtype=np.float64)
    N = onb.shape[0]
    if numba_enabled():
        return _pattern_bounds_nb(onb)
    P = 1 << (N - 1)
    out = np.empty(P, np.float64)
    step = 1 << min(chunk_bits, N - 1)
    bits = np.arange(N - 1)
    for start in range(0, P, step):
        idx = np.arange(start, min(start + step, P))
        signs = np.ones((idx.size, N))
        signs[:, 1:] = 1.0 - 2.0 * ((idx[:, None] >> bits) & 1)
        proj = signs @ onb
        out[start : start + idx.size] = N - np.einsum("ij,ij->i", proj, proj)
    return out
