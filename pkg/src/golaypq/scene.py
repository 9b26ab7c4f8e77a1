"""Point-target returns, Q-weighted Doppler processing and delay-Doppler maps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .ambiguity import DB_FLOOR, PulseTrainDesign, to_db


@dataclass(frozen=True)
class PointTarget:
    delay_chips: int
    doppler: float
    amplitude: complex = 1.0

    @classmethod
    def from_db(cls, delay_chips: int, doppler: float, amp_db: float = 0.0, phase: float = 0.0):
        amp = 10.0 ** (amp_db / 20.0) * np.exp(1j * phase)
        return cls(int(delay_chips), float(doppler), complex(amp))

    @property
    def amp_db(self) -> float:
        return float(20.0 * np.log10(abs(self.amplitude)))


@dataclass(frozen=True)
class Scene:
    targets: tuple[PointTarget, ...] = ()
    noise_power: float = 0.0
    seed: int = 0
    window: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.noise_power < 0:
            raise ValueError("noise power N0 must be >= 0")

    def delay_window(self, L: int) -> tuple[int, int]:
        lo, hi = self.window if self.window is not None else (1 - L, L - 1)
        if lo > hi:
            raise ValueError(f"empty delay window [{lo}, {hi}]")
        return int(lo), int(hi)

    def weak_indices(self, margin_db: float = 10.0) -> list[int]:
        """Targets at least ``margin_db`` below the strongest one."""
        if not self.targets:
            return []
        top = max(t.amp_db for t in self.targets)
        return [i for i, t in enumerate(self.targets) if t.amp_db <= top - margin_db]

    def without(self, indices) -> "Scene":
        drop = set(indices)
        kept = tuple(t for i, t in enumerate(self.targets) if i not in drop)
        return replace(self, targets=kept)


def default_scene() -> Scene:
    """Three equal stationary reflectors and two slow targets 30 dB down."""
    targets = [
        PointTarget.from_db(-20, 0.0, 0.0),
        PointTarget.from_db(0, 0.0, 0.0),
        PointTarget.from_db(25, 0.0, 0.0),
        PointTarget.from_db(-10, 0.05, -30.0),
        PointTarget.from_db(12, -0.04, -30.0),
    ]
    return Scene(tuple(targets), noise_power=1e-6, seed=2011)


def scene_from_dict(doc: dict) -> Scene:
    """Parse ``{targets: [{delay_chips, doppler, amp_db, phase}], noise_db, seed}``.

    Raises ``ValueError`` naming the offending field.
    """
    if not isinstance(doc, dict):
        raise ValueError("scene config: top level must be a JSON object")
    targets = []
    for i, t in enumerate(doc.get("targets", [])):
        where = f"scene config: targets[{i}]"
        if not isinstance(t, dict):
            raise ValueError(f"{where}: expected an object")
        if "delay_chips" not in t:
            raise ValueError(f"{where}.delay_chips: missing")
        try:
            delay = t["delay_chips"]
            if int(delay) != delay:
                raise ValueError
            targets.append(
                PointTarget.from_db(
                    int(delay),
                    float(t.get("doppler", 0.0)),
                    float(t.get("amp_db", 0.0)),
                    float(t.get("phase", 0.0)),
                )
            )
        except (TypeError, ValueError):
            raise ValueError(f"{where}: delay_chips must be an integer and "
                             f"doppler/amp_db/phase numbers, got {t!r}") from None
    noise_db = doc.get("noise_db")
    try:
        n0 = 0.0 if noise_db is None else 10.0 ** (float(noise_db) / 10.0)
    except (TypeError, ValueError):
        raise ValueError(f"scene config: noise_db must be a number or null, got {noise_db!r}") from None
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ValueError(f"scene config: seed must be a non-negative integer, got {seed!r}")
    window = doc.get("window")
    if window is not None:
        if not (isinstance(window, list) and len(window) == 2 and all(isinstance(v, int) for v in window)):
            raise ValueError(f"scene config: window must be [kmin, kmax] integers, got {window!r}")
        window = tuple(window)
    return Scene(tuple(targets), n0, seed, window)


def scene_to_dict(scene: Scene) -> dict:
    doc = {
        "targets": [
            {
                "delay_chips": t.delay_chips,
                "doppler": t.doppler,
                "amp_db": t.amp_db,
                "phase": float(np.angle(t.amplitude)),
            }
            for t in scene.targets
        ],
        "noise_db": None if scene.noise_power == 0 else float(10 * np.log10(scene.noise_power)),
        "seed": scene.seed,
    }
    if scene.window is not None:
        doc["window"] = list(scene.window)
    return doc


def load_scene(path) -> Scene:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"scene config {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return scene_from_dict(doc)


def inject_noise(seed: int, n0: float, n_pulses: int, length: int, trials: int | None = None) -> np.ndarray:
    """Circular complex white Gaussian noise with variance ``n0`` per sample.

    One child stream per pulse is spawned from ``seed``, so the noise of a
    pulse does not depend on how many pulses are drawn or in which order.
    Shape is ``(n_pulses, length)``, or ``(trials, n_pulses, length)``.
    """
    if n0 < 0:
        raise ValueError("noise power N0 must be >= 0")
    shape = (length,) if trials is None else (trials, length)
    out = np.zeros((n_pulses,) + shape, np.complex128)
    if n0 == 0:
        return out if trials is None else np.moveaxis(out, 0, 1)
    scale = np.sqrt(n0 / 2.0)
    for n, child in enumerate(np.random.SeedSequence(seed).spawn(n_pulses)):
        rng = np.random.default_rng(child)
        out[n] = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return out if trials is None else np.moveaxis(out, 0, 1)


@dataclass
class ReceiverOutputs:
    """Per-pulse correlator outputs ``u[n, i]`` at delays ``delays[i]``."""

    delays: np.ndarray
    u: np.ndarray
    q: np.ndarray = field(repr=False)


def simulate_returns(design: PulseTrainDesign, scene: Scene) -> ReceiverOutputs:
    """Received chip streams per pulse, correlated with that pulse's own code.

    The n-th received pulse carries ``b e^{j n theta}`` times the transmitted
    code delayed by ``delay_chips``, plus input noise; its correlator output is
    ``u_n(k) = sum_t b e^{j n theta_t} C_n(k - k_t) + noise``.
    """
    L, N = design.L, design.N
    lo, hi = scene.delay_window(L)
    for i, t in enumerate(scene.targets):
        if not lo <= t.delay_chips <= hi:
            raise ValueError(f"target {i} delay {t.delay_chips} outside window [{lo}, {hi}]")
    K = hi - lo + 1
    rx = inject_noise(scene.seed, scene.noise_power, N, K + L - 1)
    codes = design.pulse_codes()
    u = np.empty((N, K), np.complex128)
    for n, code in enumerate(codes):
        for t in scene.targets:
            start = t.delay_chips - lo
            rx[n, start : start + L] += t.amplitude * np.exp(1j * n * t.doppler) * code
        u[n] = np.correlate(rx[n], code.astype(np.complex128), mode="valid")
    return ReceiverOutputs(np.arange(lo, hi + 1), u, design.q)


def doppler_process(outputs: ReceiverOutputs, thetas) -> np.ndarray:
    """``D(k, theta) = sum_n q_n u_n(k) e^{-j n theta}``, shape ``(K, T)``."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    n = np.arange(outputs.u.shape[0])
    steer = np.exp(-1j * np.outer(n, thetas))
    return (outputs.q[:, None] * outputs.u).T @ steer


@dataclass
class DelayDopplerMap:
    delays: np.ndarray
    dopplers: np.ndarray
    db: np.ndarray
    norm: float
    peak: tuple[int, float]

    def sidecar(self) -> dict:
        return {
            "peak": {"k": int(self.peak[0]), "theta": float(self.peak[1])},
            "normalization": float(self.norm),
            "floor_db": DB_FLOOR,
            "min_db": float(self.db.min()),
        }


def delay_doppler_map(outputs: ReceiverOutputs, thetas) -> DelayDopplerMap:
    """Peak-normalised dB map of the Doppler-processed outputs."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if thetas.size == 0:
        raise ValueError("empty Doppler grid")
    mag = np.abs(doppler_process(outputs, thetas))
    norm = float(mag.max())
    if norm == 0.0:
        raise ValueError("receiver outputs carry no energy; nothing to normalise")
    i, j = np.unravel_index(int(np.argmax(mag)), mag.shape)
    return DelayDopplerMap(
        outputs.delays, thetas, to_db(mag / norm), norm, (int(outputs.delays[i]), float(thetas[j]))
    )


def weak_target_visibility(
    design: PulseTrainDesign,
    scene: Scene,
    halfwidth: float = 0.05,
    n_local: int = 41,
    row_points: int = 1024,
    margin_db: float = 10.0,
) -> list[dict]:
    """How far each weak target stands above the clutter around it.

    The clutter map is the same scene (same noise realisation) with the weak
    targets removed.  ``local_floor`` is the clutter magnitude maximised over
    the target's delay row within ``halfwidth`` rad of its Doppler;
    ``row_floor`` maximises over the whole row on ``[-pi, pi]``.  ``excess_db``
    compares the full-scene map value at the target cell to the local floor.
    """
    weak = scene.weak_indices(margin_db)
    full = simulate_returns(design, scene)
    clutter = simulate_returns(design, scene.without(weak))
    row_grid = np.linspace(-np.pi, np.pi, row_points)
    out = []
    for i in weak:
        t = scene.targets[i]
        row = int(np.flatnonzero(full.delays == t.delay_chips)[0])
        value = abs(doppler_process(full, [t.doppler])[row, 0])
        local = np.linspace(t.doppler - halfwidth, t.doppler + halfwidth, n_local)
        local_floor = np.abs(doppler_process(clutter, local)[row]).max()
        row_floor = np.abs(doppler_process(clutter, row_grid)[row]).max()
        with np.errstate(divide="ignore"):
            excess = 20 * np.log10(value / local_floor) if local_floor > 0 else np.inf
            row_excess = 20 * np.log10(value / row_floor) if row_floor > 0 else np.inf
        out.append(
            {
                "target": i,
                "delay_chips": t.delay_chips,
                "doppler": t.doppler,
                "value": float(value),
                "local_floor": float(local_floor),
                "row_floor": float(row_floor),
                "excess_db": float(excess),
                "row_excess_db": float(row_excess),
            }
        )
    return out


def empirical_output_noise_power(
    design: PulseTrainDesign, n0: float, trials: int, seed: int, theta: float = 0.0
) -> float:
    """Mean ``|D(0, theta)|**2`` over independent noise-only realisations."""
    noise = inject_noise(seed, n0, design.N, design.L, trials=trials)
    codes = np.array(design.pulse_codes(), dtype=np.complex128)  # (N, L)
    per_pulse = np.einsum("tnl,nl->tn", noise, np.conj(codes))
    steer = design.q * np.exp(-1j * np.arange(design.N) * theta)
    d = per_pulse @ steer
    return float(np.mean(np.abs(d) ** 2))


def monte_carlo_snr(
    design: PulseTrainDesign, n0: float, sigma_b2: float, trials: int, seed: int
) -> float:
    """Empirical output SNR for a zero-delay, zero-Doppler target with
    circular Gaussian scattering coefficient of variance ``sigma_b2``."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    b = np.sqrt(sigma_b2 / 2) * (rng.standard_normal(trials) + 1j * rng.standard_normal(trials))
    signal = np.mean(np.abs(b * design.peak()) ** 2)
    return float(signal / empirical_output_noise_power(design, n0, trials, seed))
