"""Range-azimuth coupling and peak-sidelobe studies for single-target maps."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .config import RadarConfig, Target, TargetScene, azimuth_of, channel_beta, delay_of
from .dictionaries import build_dictionaries
from .recovery import Projector, doppler_focus
from .waveforms import CarrierMode, assign_carriers, random_array, ula_array


class Layout(str, enum.Enum):
    ULA_GRID_CARRIERS = "UlaGridCarriers"
    RANDOM_CARRIERS_ULA = "RandomCarriersUla"
    RANDOM_ARRAY_GRID_CARRIERS = "RandomArrayGridCarriers"


@dataclass(frozen=True)
class AmbiguityReport:
    map: np.ndarray  # |Psi| indexed [r, s]
    main_peak: tuple[int, int, float]  # (s, r, value)
    peak_sidelobe_level: float
    config_label: str | None

    def to_dict(self) -> dict:
        s, r, v = self.main_peak
        return {"config_label": self.config_label, "main_peak": {"s": s, "r": r, "value": v},
                "peak_sidelobe_level": self.peak_sidelobe_level}


def layout_config(config: RadarConfig, label: Layout | str, seed: int = 0) -> RadarConfig:
    """Copy of ``config`` with the positions and carriers of a named layout.

    * UlaGridCarriers: transmitter-dense virtual ULA, linear carrier grid.
    * RandomCarriersUla: standard virtual ULA, i.i.d. carriers on the grid.
    * RandomArrayGridCarriers: uniform random positions on ``[0, Z]``, permuted grid carriers.
    """
    label = Layout(label)
    T, R, B = config.num_tx, config.num_rx, config.channel_bandwidth
    ss = np.random.SeedSequence(seed).spawn(2)
    if label is Layout.ULA_GRID_CARRIERS:
        tx, rx = ula_array(T, R, dense="tx")
        f = assign_carriers(T, B, CarrierMode.LINEAR)
    elif label is Layout.RANDOM_CARRIERS_ULA:
        tx, rx = ula_array(T, R)
        f = assign_carriers(T, B, CarrierMode.IID, ss[0])
    else:
        tx, rx = random_array(T, R, config.aperture, ss[0])
        f = assign_carriers(T, B, CarrierMode.PERMUTATION, ss[1])
    aperture = max(config.aperture, float(np.max(tx)), float(np.max(rx)))
    return replace(config, tx_positions=tuple(tx), rx_positions=tuple(rx), tx_carriers=tuple(f), aperture=aperture)


def peak_sidelobe_level(mag: np.ndarray, peak: tuple[int, ...], radius: int = 1) -> float:
    """Largest value outside the ``+-radius`` box around ``peak``, relative to the peak."""
    masked = mag.copy()
    masked[tuple(slice(max(0, i - radius), i + radius + 1) for i in peak)] = -np.inf
    top = mag[peak]
    return float(masked.max() / top) if top > 0 else 0.0


def ambiguity_map(
    config: RadarConfig,
    target: Target,
    label: Layout | str | None = None,
    seed: int = 0,
    beta_mode: str = "full",
    radius: int = 1,
) -> AmbiguityReport:
    """Noiseless single-target range-azimuth correlation map and its PSL.

    With ``label=None`` the positions and carriers of ``config`` are used as
    they are. The map is the first projection of joint recovery, evaluated on
    the target's Doppler slice.
    """
    cfg = layout_config(config, label, seed) if label is not None else config
    ds = build_dictionaries(cfg, beta_mode)
    phi = doppler_focus(ds.model(TargetScene((target,)))).phi
    mag = np.abs(Projector(ds).project_slice(phi[:, target.doppler_index]))
    r, s = np.unravel_index(int(np.argmax(mag)), mag.shape)
    psl = peak_sidelobe_level(mag, (r, s), radius)
    return AmbiguityReport(mag, (int(s), int(r), float(mag[r, s])), psl,
                           None if label is None else Layout(label).value)


def psl_distribution(config: RadarConfig, label: Layout | str, seeds, target: Target | None = None,
                     beta_mode: str = "full") -> np.ndarray:
    """PSL over layout draws; the default target sits mid-grid."""
    if target is None:
        target = Target(1.0, config.total_bins // 2, config.num_channels // 2, config.num_pulses // 2)
    return np.array([ambiguity_map(config, target, label, int(sd), beta_mode).peak_sidelobe_level for sd in seeds])


def channel_phases(config: RadarConfig, s: int, r: int, beta_mode: str = "simplified") -> np.ndarray:
    """Per-channel phases ``exp(j 2 pi beta_mq theta_r) exp(-j 2 pi f_m tau_s)``.

    Normalized to the ``(0, 0)`` channel so that a cell-only constant drops out.
    Shape ``(T, R)``.
    """
    carriers = np.asarray(config.tx_carriers)
    if beta_mode == "full":
        beta = config.beta
    else:
        beta = channel_beta(config.tx_positions, config.rx_positions, np.zeros(config.num_tx), config.wavelength)
    v = np.exp(2j * np.pi * beta * azimuth_of(config, r)) * np.exp(-2j * np.pi * carriers * delay_of(config, s))[:, None]
    return v / v[0, 0]


def channel_phase_fractions(config: RadarConfig, s: int, r: int) -> list[list[Fraction]]:
    """Exact cycles ``(xi_m + zeta_q) theta_r - (f_m / B_h) s / T`` mod 1, relative to channel (0, 0).

    Rational counterpart of :func:`channel_phases` with the simplified beta;
    positions and carrier ratios are converted exactly from their binary floats.
    """
    T, R = config.num_tx, config.num_rx
    theta = Fraction(-1) + Fraction(2 * r, T * R)
    delay = Fraction(s, T)
    cyc = [
        [
            (Fraction(config.tx_positions[m]) + Fraction(config.rx_positions[q])) * theta
            - Fraction(config.tx_carriers[m]) / Fraction(config.channel_bandwidth) * delay
            for q in range(R)
        ]
        for m in range(T)
    ]
    ref = cyc[0][0]
    return [[(c - ref) % 1 for c in row] for row in cyc]


def coupling_class(config: RadarConfig, s, r):
    """``(r - s R) mod TR``: cells sharing it alias in the transmitter-dense ULA."""
    return (np.asarray(r) - np.asarray(s) * config.num_rx) % config.num_channels
