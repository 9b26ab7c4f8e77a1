"""Max-SNR designs subject to a prescribed spectral-null order.

Two searches are provided:

``max_snr_search``
    Bounded enumeration over integer combinations of the difference basis.
    Exhaustive inside the coefficient box, so the answer depends on the bound.

``max_snr_exact``
    For a fixed sign pattern ``s`` the best positive weights are the residual
    of ``s`` after a least-squares fit by polynomials of degree ``<= M``; its
    squared norm bounds the SNR ratio of every design with that pattern.
    Sweeping all patterns and taking the best pattern whose residual keeps the
    signs of ``s`` gives the optimum over all positive real weights, which is
    rational and therefore realised by integer weights.
"""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from math import comb, gcd, lcm

import numpy as np
import sympy

from . import _accel
from .seqdesign import (
    InfeasibleSearchError,
    PQDesign,
    _check_length,
    _check_order,
    canonical_product,
    difference_basis,
    null_order,
)

log = logging.getLogger(__name__)

DEFAULT_BOUND = 5
MAX_EXACT_N = 24
_INT64_LIMIT = 2**62
_BIGINT_SCAN_LIMIT = 200_000


def _lattice_scan_bigint(basis, bound: int):
    """Python-int version of the lattice kernel for high orders, where the
    stencil coefficients push the cross-multiplied scores past int64."""
    best = None
    rng = range(-bound, bound + 1)
    for u in itertools.product(range(1, bound + 1), *[rng] * (len(basis) - 1)):
        c = [sum(us * b[i] for us, b in zip(u, basis)) for i in range(len(basis[0]))]
        if 0 in c:
            continue
        g = gcd(*c)
        c = [v // g for v in c]
        s1, s2 = sum(abs(v) for v in c), sum(v * v for v in c)
        if _accel._better(s1, s2, c, best):
            best = (s1, s2, c)
    return best


def _finish(c, label: str, M: int, notes: dict):
    design = PQDesign.from_product(canonical_product(c), label, notes)
    rep = design.report()
    if rep.null_order < M:  # pragma: no cover - guarded by construction
        raise AssertionError(f"search returned null order {rep.null_order} < {M}")
    return design.p, design.q, rep


def max_snr_search(N: int, M: int, coeff_bound: int = DEFAULT_BOUND):
    """Bounded lattice search for the max-SNR design with null order ``>= M``.

    Every ``c = sum_s u_s b_s`` with ``|u_s| <= coeff_bound`` over the
    difference basis ``b_s`` is scored; candidates with a zero entry are
    rejected, and the best ``(sum|c|)**2 / sum c**2`` wins with ties broken by
    the lexicographically smallest ``|c|``.

    Returns
    -------
    tuple
        ``(p, q, DesignReport)``.

    Raises
    ------
    InfeasibleSearchError
        If every candidate inside the bound has a zero entry.
    """
    N = _check_length(N)
    _check_order(N, M)
    if int(coeff_bound) != coeff_bound or coeff_bound < 1:
        raise ValueError(f"coeff_bound must be a positive integer, got {coeff_bound!r}")
    coeff_bound = int(coeff_bound)
    basis = np.array(difference_basis(N, M), dtype=object)
    peak = coeff_bound * 2 ** (M + 1)
    # u_0 multiplies the only vector touching c_0, so u_0 != 0; c and -c score
    # the same, hence u_0 > 0 loses nothing.
    if N**3 * peak**4 < _INT64_LIMIT:
        best = _accel.lattice_search(basis.astype(np.int64), coeff_bound)
    elif coeff_bound * (2 * coeff_bound + 1) ** (len(basis) - 1) <= _BIGINT_SCAN_LIMIT:
        best = _lattice_scan_bigint(basis.tolist(), coeff_bound)
    else:
        raise ValueError(
            f"coeff_bound={coeff_bound} with N={N}, M={M} overflows exact int64 scoring "
            f"and is too large for the big-integer scan"
        )
    if best is None:
        raise InfeasibleSearchError(
            f"infeasible within bound: no zero-free design with N={N}, M={M}, "
            f"coeff_bound={coeff_bound}"
        )
    notes = {"method": "lattice", "coeff_bound": coeff_bound, "target_order": M}
    return _finish(best[2], "maxsnr", M, notes)


def _orthonormal_poly_basis(N: int, M: int) -> np.ndarray:
    t = (np.arange(N) - (N - 1) / 2) / max((N - 1) / 2, 1)
    V = np.polynomial.legendre.legvander(t, M)
    Q, _ = np.linalg.qr(V)
    return Q


def _pattern_from_index(idx: int, N: int) -> list[int]:
    return [1] + [-1 if (idx >> b) & 1 else 1 for b in range(N - 1)]


def polynomial_residual(s, M: int) -> list[Fraction]:
    """Exact residual of ``s`` after least-squares fitting polynomials of degree ``<= M``.

    The residual is orthogonal to every moment row, i.e. it lies in the
    null space tested by :func:`vandermonde_check`.
    """
    N = len(s)
    V = sympy.Matrix(M + 1, N, lambda m, n: (n + 1) ** m)
    sv = sympy.Matrix(s)
    w = (V * V.T).LUsolve(V * sv)
    r = sv - V.T * w
    return [Fraction(int(v.p), int(v.q)) for v in r]


def _integerise(r) -> list[int]:
    den = 1
    for v in r:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in r]


def max_snr_exact(N: int, M: int, tol: float = 1e-9):
    """Max-SNR design over all positive weights via the sign-pattern sweep.

    ``notes['certified']`` is True when the returned ratio is provably the
    global optimum: every sign pattern with a higher SNR upper bound was
    examined and found to admit no strictly positive optimum.  When a
    higher-bound pattern fails positivity its true constrained optimum is
    not computed, the best feasible projection is returned and
    ``certified`` is False.

    Returns
    -------
    tuple
        ``(p, q, DesignReport)``.
    """
    N = _check_length(N)
    _check_order(N, M)
    if N > MAX_EXACT_N:
        raise ValueError(f"sign-pattern sweep supports N <= {MAX_EXACT_N}, got {N}")
    bounds = _accel.pattern_bounds(_orthonormal_poly_basis(N, M))
    order = np.argsort(-bounds, kind="stable")

    best = None  # (ratio, |c| tuple, c)
    worst_skipped = -np.inf
    for idx in order:
        bound = float(bounds[idx])
        if best is not None and bound < float(best[0]) * (1 - tol) - tol:
            break
        s = _pattern_from_index(int(idx), N)
        r = polynomial_residual(s, M)
        if not all(v * sv > 0 for v, sv in zip(r, s)):
            worst_skipped = max(worst_skipped, bound)
            continue
        c = _integerise(r)
        c = list(canonical_product(c))
        a = [abs(v) for v in c]
        ratio = Fraction(sum(a) ** 2, sum(v * v for v in a))
        cand = (ratio, tuple(a), c)
        if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
            best = cand
    if best is None:
        raise InfeasibleSearchError(
            f"infeasible: no sign pattern admits strictly positive weights for N={N}, M={M}"
        )
    certified = worst_skipped <= float(best[0]) * (1 + tol) + tol
    if not certified:
        log.warning("max_snr_exact(N=%d, M=%d): optimum not certified", N, M)
    notes = {"method": "exact", "certified": bool(certified), "target_order": M}
    return _finish(best[2], "maxsnr", M, notes)


def binomial_ratio_closed_form(N: int) -> Fraction:
    """``4**(N-1) / C(2N-2, N-1)``, the SNR ratio of the length-N binomial weights."""
    return Fraction(4 ** (N - 1), comb(2 * N - 2, N - 1))


def maxsnr_design(N: int, M: int, method: str = "exact", coeff_bound: int = DEFAULT_BOUND):
    """Max-SNR :class:`PQDesign` by ``method`` ('exact' or 'lattice')."""
    if method == "exact":
        p, q, rep = max_snr_exact(N, M)
    elif method == "lattice":
        p, q, rep = max_snr_search(N, M, coeff_bound)
    else:
        raise ValueError(f"unknown search method {method!r}")
    return PQDesign(p, q, "maxsnr", rep.notes)


__all__ = [
    "DEFAULT_BOUND",
    "max_snr_search",
    "max_snr_exact",
    "maxsnr_design",
    "polynomial_residual",
    "binomial_ratio_closed_form",
    "null_order",
]
