"""Transmit/receive sequence pairs (P, Q) and their exact null-order and SNR metrics.

All sequence arithmetic here is over Python integers, so moment sums and
SNR ratios are exact for any length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Sequence

import numpy as np


class InfeasibleSearchError(ValueError):
    """No admissible (P, Q) design exists inside the searched region."""


def _as_int_tuple(seq, name: str) -> tuple[int, ...]:
    out = []
    for v in seq:
        iv = int(v)
        if iv != v:
            raise ValueError(f"{name} must contain integers, got {v!r}")
        out.append(iv)
    return tuple(out)


def _check_length(N: int, minimum: int = 2) -> int:
    if int(N) != N or N < minimum:
        raise ValueError(f"sequence length N must be an integer >= {minimum}, got {N!r}")
    return int(N)


def validate_p(bits: Sequence[int]) -> tuple[int, ...]:
    bits = _as_int_tuple(bits, "P")
    _check_length(len(bits))
    if any(b not in (0, 1) for b in bits):
        raise ValueError("P must be a 0/1 sequence")
    return bits


def validate_q(weights: Sequence[int]) -> tuple[int, ...]:
    weights = _as_int_tuple(weights, "Q")
    _check_length(len(weights))
    if any(w <= 0 for w in weights):
        raise ValueError("Q weights must be strictly positive integers")
    return weights


@dataclass(frozen=True)
class DesignReport:
    label: str
    N: int
    null_order: int
    snr_ratio: Fraction
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def snr_rounded(self) -> float:
        return round(float(self.snr_ratio), 2)


@dataclass(frozen=True)
class PQDesign:
    """A transmit bit sequence P with its positive integer receive weights Q."""

    p: tuple[int, ...]
    q: tuple[int, ...]
    label: str = "custom"
    notes: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p", validate_p(self.p))
        object.__setattr__(self, "q", validate_q(self.q))
        if len(self.p) != len(self.q):
            raise ValueError(f"P and Q lengths differ: {len(self.p)} vs {len(self.q)}")

    @property
    def N(self) -> int:
        return len(self.p)

    @property
    def product(self) -> tuple[int, ...]:
        return signed_product(self.p, self.q)

    @classmethod
    def from_product(cls, c: Sequence[int], label: str = "custom", notes=None) -> "PQDesign":
        """Split a nonzero integer sequence into (P, Q): negative entries transmit x."""
        c = _as_int_tuple(c, "product sequence")
        if any(v == 0 for v in c):
            raise ValueError("product sequence has a zero entry; Q must be strictly positive")
        p = tuple(1 if v < 0 else 0 for v in c)
        q = tuple(abs(v) for v in c)
        return cls(p, q, label, dict(notes or {}))

    def report(self) -> DesignReport:
        return DesignReport(
            label=self.label,
            N=self.N,
            null_order=null_order(self.product),
            snr_ratio=snr_ratio(self.q),
            notes=dict(self.notes),
        )


# -- sequence constructors ---------------------------------------------------


def ptm_sequence(N: int) -> tuple[int, ...]:
    """Prouhet-Thue-Morse bits ``p_0 .. p_{N-1}`` (``p_0 = 0``); ``N`` a power of two."""
    N = _check_length(N)
    if N & (N - 1):
        raise ValueError(f"PTM length must be a power of two, got {N}")
    p = [0] * N
    for n in range(1, N):
        p[n] = p[n // 2] if n % 2 == 0 else 1 - p[n // 2]
    return tuple(p)


def alternating_sequence(N: int) -> tuple[int, ...]:
    """1 at even indices, 0 at odd ones."""
    N = _check_length(N)
    return tuple(1 - (n % 2) for n in range(N))


def binomial_weights(N: int) -> tuple[int, ...]:
    N = _check_length(N)
    return tuple(comb(N - 1, n) for n in range(N))


def signed_product(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``c_n = (-1)**p_n * q_n``."""
    p, q = validate_p(p), validate_q(q)
    if len(p) != len(q):
        raise ValueError(f"P and Q lengths differ: {len(p)} vs {len(q)}")
    return tuple(-w if b else w for b, w in zip(p, q))


def conventional_design(N: int) -> PQDesign:
    """Alternating x/y transmission followed by a plain matched filter."""
    return PQDesign(alternating_sequence(N), (1,) * N, "conventional")


def ptm_design(N: int) -> PQDesign:
    return PQDesign(ptm_sequence(N), (1,) * N, "ptm")


def binomial_design(N: int) -> PQDesign:
    return PQDesign(alternating_sequence(N), binomial_weights(N), "binomial")


# -- null order --------------------------------------------------------------


def moments(c: Sequence[int], orders, offset: int = 0) -> list[int]:
    """Exact ``sum_n (n + offset)**m * c_n`` for each ``m`` in ``orders``."""
    c = _as_int_tuple(c, "product sequence")
    return [sum((n + offset) ** m * v for n, v in enumerate(c)) for m in orders]


def null_order(c: Sequence[int]) -> int:
    """Largest M with ``sum_n n**m c_n == 0`` for all ``m <= M``.

    Returns -1 when the plain sum is already nonzero.  The result never
    exceeds ``N - 2``: a nonzero length-N sequence cannot annihilate all N
    moments of a square Vandermonde system.
    """
    c = _as_int_tuple(c, "product sequence")
    N = _check_length(len(c))
    order = -1
    for m in range(N - 1):
        if sum(n**m * v for n, v in enumerate(c)) != 0:
            break
        order = m
    return order


def _check_order(N: int, M: int) -> None:
    if M < 0:
        raise ValueError(f"null order M must be >= 0, got {M}")
    if M >= N - 1:
        raise ValueError(
            f"null order M={M} is not achievable with N={N}: it must be below N-1, "
            f"since only the all-zero sequence has {N} vanishing moments "
            f"(the binomial design already attains the maximum N-2={N - 2})"
        )


def vandermonde_check(c: Sequence[int], M: int) -> bool:
    """True iff the (M+1) x N matrix with rows ``[(n+1)**m]`` annihilates ``c``."""
    c = _as_int_tuple(c, "product sequence")
    _check_order(len(c), M)
    return all(v == 0 for v in moments(c, range(M + 1), offset=1))


def difference_basis(N: int, M: int) -> list[tuple[int, ...]]:
    """Shifted (M+1)-th order difference stencils spanning the integer null space.

    Vector ``s`` (``s = 0 .. N-M-2``) holds ``(-1)**(n-s) * C(M+1, n-s)`` at
    positions ``n = s .. s+M+1`` and zeros elsewhere.
    """
    N = _check_length(N)
    _check_order(N, M)
    stencil = [(-1) ** j * comb(M + 1, j) for j in range(M + 2)]
    basis = []
    for s in range(N - M - 1):
        row = [0] * N
        row[s : s + M + 2] = stencil
        basis.append(tuple(row))
    return basis


# -- SNR ---------------------------------------------------------------------


def snr_ratio(q: Sequence[int]) -> Fraction:
    """``||q||_1**2 / ||q||_2**2`` as an exact fraction."""
    q = validate_q(q)
    return Fraction(sum(q) ** 2, sum(w * w for w in q))


def output_noise_power(q: Sequence[int], n0: float, L: int):
    """Receiver output noise power ``N0 * L * ||q||_2**2`` for white input noise."""
    q = validate_q(q)
    if not n0 > 0:
        raise ValueError("noise power density N0 must be positive")
    return n0 * L * sum(w * w for w in q)


def canonical_product(c: Sequence[int]) -> tuple[int, ...]:
    """Reduce by the gcd and fix the sign so that ``c_0 < 0`` (``p_0 = 1``)."""
    c = _as_int_tuple(c, "product sequence")
    g = 0
    for v in c:
        g = gcd(g, v)
    if g == 0:
        raise ValueError("zero sequence has no canonical form")
    c = tuple(v // g for v in c)
    if c[0] > 0:
        c = tuple(-v for v in c)
    return c


def design_record(design: PQDesign, M: int | None = None) -> dict:
    """JSON-ready record ``{label, N, M, p, q, snr_ratio_num, snr_ratio_den}``."""
    rep = design.report()
    ratio = rep.snr_ratio
    rec = {
        "label": design.label,
        "N": design.N,
        "M": rep.null_order if M is None else M,
        "null_order": rep.null_order,
        "p": list(design.p),
        "q": list(design.q),
        "snr_ratio_num": ratio.numerator,
        "snr_ratio_den": ratio.denominator,
        "snr_ratio": rep.snr_rounded,
    }
    if design.notes:
        rec["notes"] = dict(design.notes)
    return rec


def design_from_record(rec: dict) -> PQDesign:
    try:
        design = PQDesign(rec["p"], rec["q"], rec.get("label", "custom"), rec.get("notes") or {})
    except KeyError as exc:
        raise ValueError(f"design record missing field {exc.args[0]!r}") from None
    if "N" in rec and rec["N"] != design.N:
        raise ValueError(f"design record N={rec['N']} disagrees with sequence length {design.N}")
    return design


def as_float_arrays(design: PQDesign) -> tuple[np.ndarray, np.ndarray]:
    """(q, c) as float arrays for the numeric modules."""
    return np.array(design.q, dtype=np.float64), np.array(design.product, dtype=np.float64)
