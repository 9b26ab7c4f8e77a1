"""Cross-ambiguity of P- and Q-pulse trains built from a Golay pair.

The Doppler variable ``theta`` is the phase advance over one PRI in radians.
Delay is discretised at chip intervals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .golay import ChipWaveform, GolayPair, sample_waveform
from .seqdesign import PQDesign

DB_FLOOR = -300.0


@dataclass(frozen=True)
class PulseTrainDesign:
    """A (P, Q) design bound to a Golay pair and pulse timing.

    ``pri_chips`` is the PRI in chip units and defaults to ``2L`` so that
    correlations of neighbouring pulses never overlap.
    """

    design: PQDesign
    pair: GolayPair
    pri_chips: int | None = None
    t_c: float = 1e-6
    _tables: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.pri_chips is None:
            object.__setattr__(self, "pri_chips", 2 * self.pair.L)
        if self.pri_chips < self.pair.L:
            raise ValueError(
                f"PRI of {self.pri_chips} chips is shorter than the {self.pair.L}-chip waveform"
            )
        if self.t_c <= 0:
            raise ValueError("chip duration t_c must be positive")
        cx, cy = self.pair.correlation_tables()
        object.__setattr__(self, "_tables", ((cx + cy) / 2.0, (cx - cy) / 2.0))

    @property
    def N(self) -> int:
        return self.design.N

    @property
    def L(self) -> int:
        return self.pair.L

    @property
    def T(self) -> float:
        return self.pri_chips * self.t_c

    @property
    def q(self) -> np.ndarray:
        return np.array(self.design.q, dtype=np.float64)

    @property
    def c(self) -> np.ndarray:
        return np.array(self.design.product, dtype=np.float64)

    def pulse_codes(self) -> list[np.ndarray]:
        """Chip code of each transmitted pulse: ``x`` where ``p_n = 1``, else ``y``."""
        x, y = self.pair.arrays()
        return [x if b else y for b in self.design.p]

    def peak(self) -> float:
        """``|chi(0, 0)| = L * ||q||_1``."""
        return float(self.L * sum(self.design.q))


@dataclass
class CrossAmbiguityMap:
    delays: np.ndarray
    dopplers: np.ndarray
    values: np.ndarray  # shape (len(delays), len(dopplers))
    peak: float  # |chi(0, 0)|

    def __post_init__(self):
        if self.values.shape != (self.delays.size, self.dopplers.size):
            raise ValueError("value matrix does not match the delay/Doppler grids")

    def db(self) -> np.ndarray:
        return to_db(np.abs(self.values) / self.peak)


def to_db(ratio) -> np.ndarray:
    ratio = np.asarray(ratio, dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = 20.0 * np.log10(ratio)
    return np.maximum(out, DB_FLOOR)


def _check_lag(design: PulseTrainDesign, k) -> None:
    k = np.asarray(k)
    if np.any(np.abs(k) > design.L - 1):
        raise ValueError(f"lag outside [-(L-1), L-1] = [{1 - design.L}, {design.L - 1}]")


def spectrum(c, theta):
    """``S(theta) = sum_n c_n exp(j n theta)``; vectorised over ``theta``."""
    c = np.asarray(c, dtype=np.float64)
    th = np.asarray(theta, dtype=np.float64)
    out = np.exp(1j * np.multiply.outer(th, np.arange(c.size))) @ c
    return complex(out) if out.ndim == 0 else out


def cross_ambiguity(design: PulseTrainDesign, k: int, theta: float) -> complex:
    """Closed-form ``chi(k, theta)``.

    ``chi = (C_x + C_y)/2 * sum q_n e^{jn theta} - (C_x - C_y)/2 * S(theta)``.

    The minus sign follows from sending ``x`` where ``p_n = 1``: those pulses
    carry ``c_n = -q_n`` yet contribute ``+C_x``.
    """
    _check_lag(design, k)
    half_sum, half_diff = design._tables
    i = int(k) + design.L - 1
    return complex(half_sum[i] * spectrum(design.q, theta) - half_diff[i] * spectrum(design.c, theta))


def ambiguity_map(design: PulseTrainDesign, thetas, delays=None) -> CrossAmbiguityMap:
    """Dense closed-form evaluation over ``delays x thetas``."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if thetas.size == 0:
        raise ValueError("empty Doppler grid")
    L = design.L
    delays = np.arange(1 - L, L) if delays is None else np.atleast_1d(np.asarray(delays, int))
    _check_lag(design, delays)
    half_sum, half_diff = design._tables
    sq = spectrum(design.q, thetas)
    sc = spectrum(design.c, thetas)
    idx = delays + L - 1
    values = np.outer(half_sum[idx], sq) - np.outer(half_diff[idx], sc)
    return CrossAmbiguityMap(delays, thetas, values, design.peak())


def waveform_oracle_ambiguity(
    design: PulseTrainDesign, k: int, theta: float, samples_per_chip: int = 1
) -> complex:
    """Brute-force ``chi(k, theta)`` from sampled pulse trains.

    Builds the transmitted P-train and the Q-weighted receive train sample by
    sample, applies ``e^{j n theta}`` to the whole n-th received pulse, and
    correlates the two trains at a delay of ``k`` chips.
    """
    _check_lag(design, k)
    if design.pri_chips < 2 * design.L - 1:
        raise ValueError("oracle needs pri_chips >= 2L-1 so adjacent pulse correlations stay apart")
    cfg = ChipWaveform(t_c=design.t_c, samples_per_chip=samples_per_chip)
    spc = samples_per_chip
    pri = design.pri_chips * spc
    pad = design.L * spc
    total = design.N * pri + 2 * pad
    rx = np.zeros(total, np.complex128)
    ref = np.zeros(total, np.complex128)
    for n, (code, w) in enumerate(zip(design.pulse_codes(), design.design.q)):
        s = sample_waveform(code, cfg)
        start = pad + n * pri
        rx[start : start + s.size] += np.exp(1j * n * theta) * s
        ref[start : start + s.size] += w * s
    shift = int(k) * spc
    # sum_t rx[t] * conj(ref[t - shift])
    if shift >= 0:
        return complex(np.vdot(ref[: total - shift], rx[shift:]))
    return complex(np.vdot(ref[-shift:], rx[: total + shift]))


def range_sidelobe_peak(amap: CrossAmbiguityMap, interval) -> float:
    """Peak-normalised range-sidelobe level (dB) over a closed Doppler interval.

    Takes the largest ``|chi(k, theta)|`` with ``k != 0`` and ``theta`` inside
    ``interval``, relative to ``|chi(0, 0)|``.  Exact zeros map to
    :data:`DB_FLOOR`.
    """
    lo, hi = interval
    if lo > hi:
        raise ValueError(f"empty Doppler interval [{lo}, {hi}]")
    eps = 1e-12 * max(1.0, abs(lo), abs(hi))
    cols = (amap.dopplers >= lo - eps) & (amap.dopplers <= hi + eps)
    rows = amap.delays != 0
    if not cols.any():
        raise ValueError(f"Doppler interval [{lo}, {hi}] contains no grid point")
    if not rows.any():
        raise ValueError("map has no nonzero delays")
    worst = np.abs(amap.values[np.ix_(rows, cols)]).max()
    return float(to_db(worst / amap.peak))
