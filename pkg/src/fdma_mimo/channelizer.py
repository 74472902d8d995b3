"""Split received spectra into the T x R FDMA channels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RadarConfig
from .errors import FamilyMismatch, MissingBand
from .synthesis import RxSpectra
from .tensorio import read_tensor, write_tensor
from .waveforms import Family, WaveformBank, flat_envelope


@dataclass(frozen=True)
class ChannelCoefficients:
    """Normalized, baseband-aligned coefficients ``y[m, q, p, k]``.

    Shape ``(T, R, P, N)``; the last axis runs over ``k = -N/2 .. N/2 - 1``.
    """

    y: np.ndarray
    config_hash: str | None = None

    @property
    def shape(self):
        return self.y.shape

    def save(self, path, seed: int | None = None) -> None:
        write_tensor(path, self.y, self.config_hash, seed)

    @classmethod
    def load(cls, path) -> "ChannelCoefficients":
        data, digest, _ = read_tensor(path)
        return cls(data, digest)


def channelize(spectra: RxSpectra, bank: WaveformBank, config: RadarConfig) -> ChannelCoefficients:
    """Matched-filter each band, normalize by ``|H_0|^2 / tau`` and shift to baseband.

    The filter and normalization are one multiply per bin by
    ``tau * conj(H_0) / |H_0|^2``; the shift by ``f_m tau`` bins is exact.
    """
    if bank.family is not Family.FDMA:
        raise FamilyMismatch("channelize needs an FDMA waveform bank")
    c = spectra.coefficients
    R, P, G = c.shape
    N = config.num_bins
    env = bank.envelope if bank.envelope is not None else flat_envelope(config)
    h0 = env.values
    gain = config.pri * np.conj(h0) / np.abs(h0) ** 2
    y = np.empty((config.num_tx, R, P, N), dtype=complex)
    for m, f in enumerate(bank.carriers):
        start = int(round(f * config.pri)) + G // 2 - N // 2
        if start < 0 or start + N > G:
            raise MissingBand(f"transmitter {m}: bins [{start}, {start + N}) not in spectra of width {G}")
        y[m] = c[:, :, start : start + N] * gain
    return ChannelCoefficients(y, spectra.config_hash)
