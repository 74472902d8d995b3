"""Radar configuration, on-grid targets, parameter grids and assumption checks.

Antenna positions are kept in units of wavelengths throughout; conversion to
metres happens only when a configuration is written to disk.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CarrierOffGrid, ConfigError, NonIntegerBinCount

SPEED_OF_LIGHT = 3.0e8
_GRID_TOL = 1e-6


class SynthesisMode(str, enum.Enum):
    EXACT = "exact"
    SIMPLIFIED = "simplified"


def channel_beta(tx_positions, rx_positions, carriers, wavelength: float) -> np.ndarray:
    """Spatial phase coefficient of every (transmitter, receiver) channel.

    ``beta[m, q] = (zeta_q + xi_m) * (f_m * lambda / c + 1)`` with positions in
    wavelengths and ``f_m`` the baseband carrier offset of transmitter ``m``.
    Shared by the synthesizer and the dictionaries so both see the same phases.
    """
    xi = np.asarray(tx_positions, dtype=float)
    zeta = np.asarray(rx_positions, dtype=float)
    f = np.asarray(carriers, dtype=float)
    scale = f * wavelength / SPEED_OF_LIGHT + 1.0
    return (xi[:, None] + zeta[None, :]) * scale[:, None]


@dataclass(frozen=True)
class RadarConfig:
    """Array geometry, waveform and timing of an FDMA MIMO pulse-Doppler radar.

    Attributes:
        num_tx, num_rx, num_pulses: T, R and P.
        pri: pulse repetition interval in seconds.
        channel_bandwidth: per-transmitter bandwidth B_h in Hz.
        carrier_freq: common carrier f_c in Hz.
        tx_positions, rx_positions: element positions in wavelengths.
        tx_carriers: baseband carrier offset f_m of each transmitter in Hz.
        aperture: normalized aperture Z (wavelengths).
        synthesis_mode: default received-signal model.
        pulse_width: pulse duration T_p in seconds; ``None`` means ``pri``.
    """

    num_tx: int
    num_rx: int
    num_pulses: int
    pri: float
    channel_bandwidth: float
    carrier_freq: float
    tx_positions: tuple[float, ...]
    rx_positions: tuple[float, ...]
    tx_carriers: tuple[float, ...]
    aperture: float
    synthesis_mode: SynthesisMode = SynthesisMode.SIMPLIFIED
    pulse_width: float | None = None

    def __post_init__(self):
        for name in ("tx_positions", "rx_positions", "tx_carriers"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        object.__setattr__(self, "synthesis_mode", SynthesisMode(self.synthesis_mode))
        if min(self.num_tx, self.num_rx, self.num_pulses) < 1:
            raise ConfigError("num_tx, num_rx and num_pulses must all be >= 1")
        if len(self.tx_positions) != self.num_tx or len(self.tx_carriers) != self.num_tx:
            raise ConfigError("tx_positions and tx_carriers need num_tx entries")
        if len(self.rx_positions) != self.num_rx:
            raise ConfigError("rx_positions needs num_rx entries")
        if self.pri <= 0 or self.channel_bandwidth <= 0 or self.carrier_freq <= 0:
            raise ConfigError("pri, channel_bandwidth and carrier_freq must be positive")
        if self.aperture < 0:
            raise ConfigError("aperture must be non-negative")

    # -- derived quantities -------------------------------------------------

    @property
    def num_bins(self) -> int:
        """N, the number of Fourier bins per channel (requires a valid grid)."""
        n = self.pri * self.channel_bandwidth
        rounded = int(round(n))
        if abs(n - rounded) > _GRID_TOL * max(1.0, n) or rounded < 2 or rounded % 2:
            raise NonIntegerBinCount(f"pri * channel_bandwidth = {n!r} is not a positive even integer")
        return rounded

    @property
    def total_bins(self) -> int:
        return self.num_tx * self.num_bins

    @property
    def num_channels(self) -> int:
        return self.num_tx * self.num_rx

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def total_bandwidth(self) -> float:
        return self.num_tx * self.channel_bandwidth

    @property
    def effective_pulse_width(self) -> float:
        return self.pri if self.pulse_width is None else self.pulse_width

    @property
    def carrier_offsets(self) -> np.ndarray:
        """Band index ``f_m / B_h + (T - 1) / 2`` of every transmitter (float)."""
        return np.asarray(self.tx_carriers) / self.channel_bandwidth + (self.num_tx - 1) / 2

    @property
    def beta(self) -> np.ndarray:
        return channel_beta(self.tx_positions, self.rx_positions, self.tx_carriers, self.wavelength)

    @property
    def eta(self) -> np.ndarray:
        """Geometric delay coefficient ``(xi_m + zeta_q) * lambda / c`` in seconds."""
        xi = np.asarray(self.tx_positions)
        zeta = np.asarray(self.rx_positions)
        return (xi[:, None] + zeta[None, :]) * self.wavelength / SPEED_OF_LIGHT

    # -- validation ---------------------------------------------------------

    def band_indices(self, require_distinct: bool = True) -> np.ndarray:
        """Integer band slot ``i_m`` in ``[0, T)`` of each carrier.

        Raises CarrierOffGrid if a carrier is off the grid or, with
        ``require_distinct``, if two transmitters share a band.
        """
        self.num_bins  # noqa: B018  (raises on a bad bin count)
        off = self.carrier_offsets
        idx = np.rint(off).astype(int)
        if np.any(np.abs(off - idx) > _GRID_TOL) or np.any(idx < 0) or np.any(idx >= self.num_tx):
            raise CarrierOffGrid(f"carriers not on the B_h grid inside [-T B_h/2, T B_h/2): {self.tx_carriers}")
        if require_distinct and len(set(idx.tolist())) != self.num_tx:
            raise CarrierOffGrid("carrier bands overlap")
        return idx

    def check(self, require_distinct: bool = True) -> None:
        """Raise if the configuration breaks a grid or geometry invariant."""
        self.band_indices(require_distinct)
        pos = np.concatenate([self.tx_positions, self.rx_positions])
        if np.any(pos < -_GRID_TOL) or np.any(pos > self.aperture + _GRID_TOL):
            raise ConfigError("antenna positions must lie in [0, aperture]")

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        d["synthesis_mode"] = self.synthesis_mode.value
        for key in ("tx_positions", "rx_positions", "tx_carriers"):
            d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RadarConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})

    def with_mode(self, mode: SynthesisMode | str) -> "RadarConfig":
        return replace(self, synthesis_mode=SynthesisMode(mode))


def config_hash(config: RadarConfig) -> str:
    """Stable SHA-256 of the canonical JSON form of ``config``."""
    blob = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def save_config(config: RadarConfig, path: str | Path, seed: int | None = None) -> None:
    d = config.to_dict()
    lam = config.wavelength
    d["tx_positions_m"] = [p * lam for p in config.tx_positions]
    d["rx_positions_m"] = [p * lam for p in config.rx_positions]
    d["seed"] = seed
    d["config_hash"] = config_hash(config)
    Path(path).write_text(json.dumps(d, indent=2, sort_keys=True))


def load_config(path: str | Path) -> RadarConfig:
    return RadarConfig.from_dict(json.loads(Path(path).read_text()))


# -- targets ----------------------------------------------------------------


@dataclass(frozen=True)
class Target:
    """A point target on the delay / azimuth / Doppler Nyquist grid."""

    amplitude: complex
    delay_index: int
    azimuth_index: int
    doppler_index: int = 0

    @property
    def cell(self) -> tuple[int, int, int]:
        return (self.delay_index, self.azimuth_index, self.doppler_index)


@dataclass(frozen=True)
class TargetScene:
    targets: tuple[Target, ...] = ()
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        cells = [t.cell for t in self.targets]
        if len(set(cells)) != len(cells):
            raise ValueError("targets must occupy distinct grid cells")

    def __len__(self) -> int:
        return len(self.targets)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([t.amplitude for t in self.targets], dtype=complex)

    @property
    def cells(self) -> np.ndarray:
        return np.array([t.cell for t in self.targets], dtype=int).reshape(-1, 3)

    def check(self, config: RadarConfig) -> None:
        c = self.cells
        limits = np.array([config.total_bins, config.num_channels, config.num_pulses])
        if np.any(c < 0) or np.any(c >= limits):
            raise ValueError(f"target cell outside the grid {tuple(limits)}")

    def scaled(self, factor: complex) -> "TargetScene":
        return TargetScene(tuple(replace(t, amplitude=t.amplitude * factor) for t in self.targets), self.seed)

    def __add__(self, other: "TargetScene") -> "TargetScene":
        return TargetScene(self.targets + other.targets, self.seed)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "targets": [
                {
                    "amplitude": [float(np.real(t.amplitude)), float(np.imag(t.amplitude))],
                    "delay_index": int(t.delay_index),
                    "azimuth_index": int(t.azimuth_index),
                    "doppler_index": int(t.doppler_index),
                }
                for t in self.targets
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TargetScene":
        targets = tuple(
            Target(complex(*t["amplitude"]), t["delay_index"], t["azimuth_index"], t.get("doppler_index", 0))
            for t in d["targets"]
        )
        return cls(targets, d.get("seed"))


# -- grids ------------------------------------------------------------------


@dataclass(frozen=True)
class Grids:
    delay: np.ndarray
    azimuth: np.ndarray
    doppler: np.ndarray


def delay_of(config: RadarConfig, s):
    return config.pri / config.total_bins * np.asarray(s)


def azimuth_of(config: RadarConfig, r):
    return -1.0 + 2.0 * np.asarray(r) / config.num_channels


def doppler_of(config: RadarConfig, u):
    return -0.5 / config.pri + np.asarray(u) / (config.num_pulses * config.pri)


def make_grids(config: RadarConfig) -> Grids:
    """Delay, azimuth-sine and Doppler grids of the Nyquist lattice."""
    return Grids(
        delay=delay_of(config, np.arange(config.total_bins)),
        azimuth=azimuth_of(config, np.arange(config.num_channels)),
        doppler=doppler_of(config, np.arange(config.num_pulses)),
    )


def nearest_indices(config: RadarConfig, delay=None, azimuth=None, doppler=None) -> tuple:
    """Quantize physical values back to grid indices (``None`` passes through)."""
    out = []
    if delay is not None:
        out.append(np.rint(np.asarray(delay) * config.total_bins / config.pri).astype(int))
    if azimuth is not None:
        out.append(np.rint((np.asarray(azimuth) + 1.0) * config.num_channels / 2).astype(int))
    if doppler is not None:
        out.append(np.rint((np.asarray(doppler) + 0.5 / config.pri) * config.num_pulses * config.pri).astype(int))
    return tuple(out)


# -- modelling assumptions ----------------------------------------------------

ASSUMPTIONS = ("a2_far", "a3_delay", "a3_doppler", "a4_accel", "a5_strict", "a5_relaxed")


@dataclass(frozen=True)
class AssumptionReport:
    """Left-over-right ratios of the modelling inequalities; small is good."""

    a2_far: float
    a3_delay: float
    a3_doppler: float
    a4_accel: float
    a5_strict: float
    a5_relaxed: float
    threshold: float = 0.1
    warnings: tuple[str, ...] = field(default=())

    def holds(self, name: str) -> bool:
        return getattr(self, name) < self.threshold

    @property
    def all_holds(self) -> dict[str, bool]:
        return {name: self.holds(name) for name in ASSUMPTIONS}

    def to_dict(self) -> dict:
        d = {name: getattr(self, name) for name in ASSUMPTIONS}
        d["threshold"] = self.threshold
        d["holds"] = self.all_holds
        d["warnings"] = list(self.warnings)
        return d


def validate_config(
    config: RadarConfig,
    max_velocity: float,
    max_range: float,
    max_acceleration: float = 0.0,
    threshold: float = 0.1,
) -> AssumptionReport:
    """Check the grid invariants and evaluate the A2-A5 margins.

    A5 is reported twice: against the total bandwidth ``T B_h`` (what a CDMA
    array needs) and against the single-channel ``B_h`` (what FDMA needs).
    """
    config.check()
    c = SPEED_OF_LIGHT
    P, tau = config.num_pulses, config.pri
    v = abs(max_velocity)
    fd = 2 * v * config.carrier_freq / c
    geo = 2 * config.aperture * config.wavelength / c
    notes = []
    if abs(config.carrier_freq * tau - round(config.carrier_freq * tau)) > 1e-6:
        msg = "f_c * pri is not an integer; per-pulse initial phase is not cancelled"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    return AssumptionReport(
        a2_far=v * P * tau / max_range if max_range > 0 else math.inf,
        a3_delay=2 * v * P * tau / c * config.total_bandwidth,
        a3_doppler=fd * config.effective_pulse_width,
        a4_accel=abs(max_acceleration) * P * tau * 2 * config.carrier_freq * P * tau / c,
        a5_strict=geo * config.total_bandwidth,
        a5_relaxed=geo * config.channel_bandwidth,
        threshold=threshold,
        warnings=tuple(notes),
    )


def build_config(
    num_tx: int,
    num_rx: int,
    num_bins: int,
    num_pulses: int = 1,
    channel_bandwidth: float = 5e6,
    carrier_freq: float = 10e9,
    tx_positions: Sequence[float] | None = None,
    rx_positions: Sequence[float] | None = None,
    tx_carriers: Sequence[float] | None = None,
    aperture: float | None = None,
    synthesis_mode: SynthesisMode | str = SynthesisMode.SIMPLIFIED,
    pulse_width: float | None = None,
) -> RadarConfig:
    """Convenience constructor: PRI from ``num_bins / channel_bandwidth``.

    Missing positions default to the standard virtual ULA, missing carriers to
    the linear grid.
    """
    from .waveforms import CarrierMode, assign_carriers, ula_array

    if tx_positions is None or rx_positions is None:
        tx_positions, rx_positions = ula_array(num_tx, num_rx)
    if tx_carriers is None:
        tx_carriers = assign_carriers(num_tx, channel_bandwidth, CarrierMode.LINEAR)
    if aperture is None:
        aperture = max(num_tx * num_rx / 2, float(np.max(tx_positions)), float(np.max(rx_positions)))
    return RadarConfig(
        num_tx=num_tx,
        num_rx=num_rx,
        num_pulses=num_pulses,
        pri=num_bins / channel_bandwidth,
        channel_bandwidth=channel_bandwidth,
        carrier_freq=carrier_freq,
        tx_positions=tuple(tx_positions),
        rx_positions=tuple(rx_positions),
        tx_carriers=tuple(tx_carriers),
        aperture=aperture,
        synthesis_mode=synthesis_mode,
        pulse_width=pulse_width,
    )
