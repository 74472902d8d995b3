"""Classic collocated-MIMO processing of CDMA waveforms.

Matched filter per code, azimuth-only beamforming with narrowband steering
vectors, Doppler DFT and L-strongest peak picking. Used as the baseline that
breaks down when the aperture delay spread approaches ``1 / B_tot``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .config import RadarConfig, channel_beta
from .dictionaries import estimates_for
from .errors import FamilyMismatch
from .recovery import RecoveryResult, pick_peaks
from .synthesis import RxSpectra
from .waveforms import Family, WaveformBank


@dataclass(frozen=True)
class CdmaMap:
    """Complex range-azimuth-Doppler map, shape ``(N_cdma, TR, P)``."""

    values: np.ndarray

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


def cdma_map(spectra: RxSpectra, bank: WaveformBank, config: RadarConfig) -> CdmaMap:
    if bank.family is not Family.CDMA:
        raise FamilyMismatch("cdma processing needs a CDMA waveform bank")
    H = bank.spectra(config)
    c = spectra.coefficients  # (R, P, G)
    R, P, G = c.shape
    T = config.num_tx
    tau = config.pri

    # matched filter + range compression: tau / sum|H_m|^2 * sum_k c H_m^* e^{j 2 pi k s / G}
    gain = tau / np.sum(np.abs(H) ** 2, axis=1)
    shift = np.exp(-1j * np.pi * np.arange(G))  # k = g - G/2
    mf = c[None, :, :, :] * np.conj(H)[:, None, None, :]  # (T, R, P, G)
    rng = scipy.fft.ifft(mf, axis=-1) * G * shift * gain[:, None, None, None]

    # Doppler DFT on the same grid as focusing, normalized
    sign = np.cos(np.pi * np.arange(P))
    dop = scipy.fft.ifft(rng * sign[None, None, :, None], axis=2)  # (T, R, P, G)

    # beamforming with CDMA steering vectors (all transmitters share the carrier)
    beta = channel_beta(config.tx_positions, config.rx_positions, bank.carriers, config.wavelength)
    theta = -1.0 + 2.0 * np.arange(T * R) / (T * R)
    steer = np.exp(-2j * np.pi * np.outer(beta.ravel(), theta)) / (T * R)  # ((m,q), r)
    flat = dop.reshape(T * R, P * G)
    bf = (steer.T @ flat).reshape(T * R, P, G)
    return CdmaMap(np.ascontiguousarray(bf.transpose(2, 0, 1)))


def cdma_process(
    spectra: RxSpectra, bank: WaveformBank, config: RadarConfig, num_targets: int, radius: int = 1
) -> RecoveryResult:
    """Classic chain followed by selection of the ``num_targets`` strongest distinct peaks."""
    cmap = cdma_map(spectra, bank, config)
    mag = cmap.magnitude.transpose(2, 1, 0).copy()  # (P, TR, G) for the (u, r, s) tie order
    support = [(s, r, u) for u, r, s in pick_peaks(mag, num_targets, radius)]
    amps = np.array([cmap.values[s, r, u] for s, r, u in support], dtype=complex)
    return RecoveryResult(
        support=tuple(support),
        amplitudes=amps,
        estimates=tuple(estimates_for(config, support)),
        method="cdma",
    )
