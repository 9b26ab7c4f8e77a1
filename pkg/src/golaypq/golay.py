"""Golay complementary pairs and their chip-level waveforms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_LOG2_LEN = 20
_DIRECT_MAX = 4096


@dataclass(frozen=True)
class GolayPair:
    """Two equal-length ``+/-1`` sequences whose autocorrelations sum to an impulse."""

    x: tuple[int, ...]
    y: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        object.__setattr__(self, "y", tuple(int(v) for v in self.y))
        if len(self.x) != len(self.y):
            raise ValueError(f"pair members differ in length: {len(self.x)} vs {len(self.y)}")
        if not self.x:
            raise ValueError("empty Golay pair")
        for name, seq in (("x", self.x), ("y", self.y)):
            if any(v not in (1, -1) for v in seq):
                raise ValueError(f"{name} must contain only +1/-1 entries")

    @property
    def L(self) -> int:
        return len(self.x)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.x, dtype=np.int64), np.array(self.y, dtype=np.int64)

    def correlation_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Autocorrelations of ``x`` and ``y`` for lags ``-(L-1) .. L-1``."""
        x, y = self.arrays()
        return autocorrelation_sequence(x), autocorrelation_sequence(y)


@dataclass(frozen=True)
class ChipWaveform:
    """Sampling parameters of a phase-coded waveform with rectangular chips.

    Each chip is a unit-energy rectangular pulse of duration ``t_c``, sampled
    ``samples_per_chip`` times, so every sample of a chip carries amplitude
    ``1/sqrt(samples_per_chip)``.
    """

    t_c: float = 1e-6
    samples_per_chip: int = 1
    shape: str = "rectangular"

    def __post_init__(self):
        if self.samples_per_chip < 1:
            raise ValueError("samples_per_chip must be >= 1")
        if self.t_c <= 0:
            raise ValueError("chip duration t_c must be positive")
        if self.shape != "rectangular":
            raise ValueError(f"unsupported chip shape {self.shape!r}")

    @property
    def sample_interval(self) -> float:
        return self.t_c / self.samples_per_chip

    def chip_pulse(self) -> np.ndarray:
        return np.full(self.samples_per_chip, 1.0 / np.sqrt(self.samples_per_chip))

    def duration(self, L: int) -> float:
        return L * self.t_c


def generate_golay_pair(log2_len: int) -> GolayPair:
    """Golay pair of length ``2**log2_len`` from the doubling recursion.

    Starting at ``([1], [1])``, each step maps ``(a, b)`` to
    ``(a|b, a|-b)`` where ``|`` is concatenation.
    """
    if not isinstance(log2_len, (int, np.integer)) or log2_len < 0:
        raise ValueError(f"log2_len must be a non-negative integer, got {log2_len!r}")
    if log2_len > MAX_LOG2_LEN:
        raise ValueError(
            f"log2_len={log2_len} exceeds the supported maximum {MAX_LOG2_LEN} "
            f"(length 2**{MAX_LOG2_LEN}); longer pairs are not generated"
        )
    a = np.ones(1, dtype=np.int64)
    b = np.ones(1, dtype=np.int64)
    for _ in range(int(log2_len)):
        a, b = np.concatenate([a, b]), np.concatenate([a, -b])
    return GolayPair(tuple(a.tolist()), tuple(b.tolist()))


def autocorrelation(seq, k: int):
    """``sum_l seq[l] * conj(seq[l - k])``; zero for ``|k| >= len(seq)``."""
    s = np.asarray(seq)
    L = s.size
    k = int(k)
    if abs(k) >= L:
        return 0
    if k >= 0:
        val = np.sum(s[k:] * np.conj(s[: L - k]))
    else:
        val = np.sum(s[: L + k] * np.conj(s[-k:]))
    if np.iscomplexobj(s):
        return complex(val)
    return int(val) if np.issubdtype(s.dtype, np.integer) else float(val)


def autocorrelation_sequence(seq) -> np.ndarray:
    """All lags ``-(L-1) .. L-1`` at once; index ``k + L - 1`` holds lag ``k``."""
    s = np.asarray(seq)
    if s.size > _DIRECT_MAX and np.issubdtype(s.dtype, np.integer):
        # exact after rounding: |values| <= sum s^2 stays far below 2**52
        n = 2 * s.size - 1
        f = np.fft.rfft(s.astype(np.float64), 2 * n)
        r = np.fft.irfft(f * np.conj(f), 2 * n)
        full = np.concatenate([r[-(s.size - 1):], r[: s.size]])
        return np.rint(full).astype(np.int64)
    return np.correlate(s, s, mode="full")


def cross_correlation_sequence(a, b) -> np.ndarray:
    """``sum_l a[l + k] * conj(b[l])`` for all lags, centred like
    :func:`autocorrelation_sequence`."""
    return np.correlate(np.asarray(a), np.asarray(b), mode="full")


@dataclass(frozen=True)
class ComplementarityReport:
    ok: bool
    max_abs_deviation: int
    worst_lag: int


def verify_complementary(pair) -> ComplementarityReport:
    """Check ``C_x(k) + C_y(k) == 2L delta(k)`` exactly over every lag.

    ``pair`` may be a :class:`GolayPair` or any ``(x, y)`` pair of integer
    sequences; the latter skips the +/-1 validation so corrupted pairs can be
    diagnosed.
    """
    x, y = (pair.x, pair.y) if isinstance(pair, GolayPair) else pair
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape != y.shape:
        raise ValueError(f"pair members differ in length: {x.size} vs {y.size}")
    L = x.size
    total = autocorrelation_sequence(x) + autocorrelation_sequence(y)
    target = np.zeros_like(total)
    target[L - 1] = 2 * L
    dev = np.abs(total - target)
    worst = int(np.argmax(dev))
    return ComplementarityReport(
        ok=bool(dev.max() == 0), max_abs_deviation=int(dev.max()), worst_lag=worst - (L - 1)
    )


def sample_waveform(code, cfg: ChipWaveform | None = None) -> np.ndarray:
    """Piecewise-constant complex samples of a phase-coded waveform.

    Parameters
    ----------
    code : sequence
        Chip phase code, typically +/-1.
    cfg : ChipWaveform, optional
        Sampling parameters; defaults to one sample per chip.

    Returns
    -------
    numpy.ndarray
        ``len(code) * samples_per_chip`` complex samples whose total energy is
        ``sum |code|^2``.
    """
    cfg = cfg or ChipWaveform()
    code = np.asarray(code, dtype=np.complex128)
    if code.size == 0:
        raise ValueError("cannot sample an empty code")
    return np.kron(code, cfg.chip_pulse())
