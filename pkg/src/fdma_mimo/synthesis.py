"""Received-signal synthesis directly in the Fourier-series domain.

Each receiver's ``p``-th frame is represented by its Fourier coefficients on
the ``T N`` global bins ``k = -T N / 2 .. T N / 2 - 1``. Two models:

* simplified: every channel sees the same envelope delay ``tau_l``; the
  array geometry enters only through ``exp(j 2 pi beta_mq theta_l)``.
* exact: the envelope of channel ``(m, q)`` is delayed by
  ``tau_l - eta_mq theta_l`` and the carrier phase ``exp(j 2 pi f_c eta_mq theta_l)``
  is applied, so envelope misalignment across the aperture is physically present.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RadarConfig, SynthesisMode, TargetScene, azimuth_of, channel_beta, config_hash, doppler_of
from .tensorio import read_tensor, write_tensor
from .waveforms import WaveformBank, fdma_bank


@dataclass(frozen=True)
class RxSpectra:
    """Per-receiver, per-pulse Fourier coefficients, shape ``(R, P, T N)``."""

    coefficients: np.ndarray
    noise_power: float = 0.0
    seed: int | None = None
    config_hash: str | None = None

    def __add__(self, other: "RxSpectra") -> "RxSpectra":
        return RxSpectra(self.coefficients + other.coefficients, self.noise_power + other.noise_power,
                         self.seed, self.config_hash)

    def save(self, path) -> None:
        write_tensor(path, self.coefficients, self.config_hash, self.seed)

    @classmethod
    def load(cls, path) -> "RxSpectra":
        data, digest, seed = read_tensor(path)
        return cls(data, seed=seed, config_hash=digest)


def synthesize(
    config: RadarConfig,
    scene: TargetScene,
    bank: WaveformBank | None = None,
    mode: SynthesisMode | str | None = None,
) -> RxSpectra:
    bank = bank if bank is not None else fdma_bank(config)
    mode = SynthesisMode(mode) if mode is not None else config.synthesis_mode
    scene.check(config)
    H = bank.spectra(config)
    T, R, P, G = config.num_tx, config.num_rx, config.num_pulses, config.total_bins
    tau = config.pri
    out = np.zeros((R, P, G), dtype=complex)
    if len(scene) == 0:
        return RxSpectra(out, config_hash=config_hash(config))

    cells = scene.cells
    alpha = scene.amplitudes
    delay_frac = cells[:, 0] / G  # tau_l / tau
    theta = azimuth_of(config, cells[:, 1])
    fd = doppler_of(config, cells[:, 2])
    dop = np.exp(-2j * np.pi * np.outer(np.arange(P) * tau, fd))  # (P, L)
    k = np.arange(G) - G // 2
    beta = channel_beta(config.tx_positions, config.rx_positions, bank.carriers, config.wavelength)
    eta_c = config.eta * config.carrier_freq  # f_c eta_mq, i.e. xi_m + zeta_q
    eta_t = config.eta / tau  # eta_mq / tau

    for m in range(T):
        support = np.flatnonzero(H[m])
        km = k[support]
        Hm = H[m, support] / tau
        if mode is SynthesisMode.SIMPLIFIED:
            spatial = np.exp(2j * np.pi * beta[m][:, None] * theta[None, :])  # (R, L)
            w = (alpha * spatial)[:, None, :] * dop[None, :, :]  # (R, P, L)
            rng = np.exp(-2j * np.pi * np.outer(delay_frac, km))  # (L, G_m)
            out[:, :, support] += (w.reshape(R * P, -1) @ rng).reshape(R, P, -1) * Hm
        else:
            for q in range(R):
                carrier = np.exp(2j * np.pi * eta_c[m, q] * theta)
                env_delay = delay_frac - eta_t[m, q] * theta  # tau_{l,mq} / tau
                rng = np.exp(-2j * np.pi * np.outer(env_delay, km))
                out[q][:, support] += ((alpha * carrier) * dop) @ rng * Hm
    return RxSpectra(out, config_hash=config_hash(config))


def noise_variance(config: RadarConfig, snr_db: float, noise_bandwidth: str = "channel") -> float:
    """Per-bin noise variance giving ``snr_db`` for a unit-energy pulse.

    SNR is mean pulse power over the noise power in ``B_h`` (``"channel"``) or
    in ``T B_h`` (``"total"``); white noise of density ``N_0`` has variance
    ``N_0 / tau`` per Fourier-series coefficient.
    """
    band = config.channel_bandwidth if noise_bandwidth == "channel" else config.total_bandwidth
    n0 = 1.0 / (config.effective_pulse_width * 10 ** (snr_db / 10) * band)
    return n0 / config.pri


def add_noise(
    spectra: RxSpectra, config: RadarConfig, snr_db: float, seed: int, noise_bandwidth: str = "channel"
) -> RxSpectra:
    """Add circular complex white Gaussian noise; ``snr_db=inf`` is a no-op.

    Every (receiver, pulse) row draws from its own stream keyed on
    ``(seed, q, p)`` so the result does not depend on evaluation order.
    """
    if np.isposinf(snr_db):
        return spectra
    if not np.isfinite(snr_db):
        raise ValueError("snr_db must be finite or +inf")
    var = noise_variance(config, snr_db, noise_bandwidth)
    c = spectra.coefficients.copy()
    R, P, G = c.shape
    scale = np.sqrt(var / 2)
    for q in range(R):
        for p in range(P):
            rng = np.random.default_rng([seed, q, p])
            c[q, p] += scale * (rng.standard_normal(G) + 1j * rng.standard_normal(G))
    return RxSpectra(c, spectra.noise_power + var, seed, spectra.config_hash)
