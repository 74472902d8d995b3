"""Pulse spectra, FDMA carrier plans, array layouts and CDMA code design."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RadarConfig
from .errors import BandOverflow

#: Envelope floor relative to the peak magnitude (60 dB noise-gain bound).
ENVELOPE_FLOOR = 1e-3


class CarrierMode(str, enum.Enum):
    LINEAR = "linear"
    PERMUTATION = "permutation"
    IID = "iid"  # i.i.d. grid draws, repeats allowed; only for sidelobe studies


class Family(str, enum.Enum):
    FDMA = "fdma"
    CDMA = "cdma"


@dataclass(frozen=True)
class EnvelopeSpectrum:
    """Samples ``H_0(2 pi k / tau)`` for ``k = -N/2 .. N/2 - 1``."""

    values: np.ndarray
    bandwidth: float
    pri: float
    floor_lifted: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def num_bins(self) -> int:
        return self.values.size

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) / self.pri)


def _unit_energy(mag: np.ndarray, pri: float) -> np.ndarray:
    return mag * np.sqrt(pri / np.sum(mag**2))


def flat_envelope(config: RadarConfig) -> EnvelopeSpectrum:
    n = config.num_bins
    return EnvelopeSpectrum(_unit_energy(np.ones(n), config.pri), config.channel_bandwidth, config.pri)


def gaussian_envelope(
    config: RadarConfig, truncation_bandwidth: float | None = None, time_width: float = 0.0
) -> EnvelopeSpectrum:
    """Gaussian pulse spectrum truncated to ``truncation_bandwidth``.

    ``time_width`` is the standard deviation of the Gaussian pulse in seconds;
    ``0`` degenerates to the flat spectrum. Bins outside the truncation band or
    below the floor are lifted to ``ENVELOPE_FLOOR * peak`` and flagged.
    """
    B = config.channel_bandwidth
    if truncation_bandwidth is None:
        truncation_bandwidth = B
    if truncation_bandwidth > B * (1 + 1e-12):
        raise ValueError("truncation_bandwidth must not exceed the channel bandwidth")
    n = config.num_bins
    # bin centres symmetric about zero: H(k) == H(-k-1)
    f = (np.arange(n) - n // 2 + 0.5) / config.pri
    mag = np.exp(-2 * np.pi**2 * time_width**2 * f**2)
    mag[np.abs(f) > truncation_bandwidth / 2] = 0.0
    floor = ENVELOPE_FLOOR * mag.max()
    lifted = bool(np.any(mag < floor))
    if lifted:
        warnings.warn("envelope bins lifted to the floor", stacklevel=2)
        mag = np.maximum(mag, floor)
    return EnvelopeSpectrum(_unit_energy(mag, config.pri), B, config.pri, floor_lifted=lifted)


def assign_carriers(
    num_tx: int, bandwidth: float, mode: CarrierMode | str = CarrierMode.PERMUTATION, seed: int | None = None
) -> np.ndarray:
    """Carrier offsets ``f_m = (i_m - (T - 1) / 2) * B_h``.

    ``LINEAR`` uses ``i_m = m``; ``PERMUTATION`` a uniformly random permutation
    of ``0 .. T-1`` (every band used once); ``IID`` independent uniform draws.
    """
    mode = CarrierMode(mode)
    rng = np.random.default_rng(seed)
    if mode is CarrierMode.LINEAR:
        idx = np.arange(num_tx)
    elif mode is CarrierMode.PERMUTATION:
        idx = rng.permutation(num_tx)
    else:
        idx = rng.integers(0, num_tx, size=num_tx)
    return (idx - (num_tx - 1) / 2) * bandwidth


def random_array(num_tx: int, num_rx: int, aperture: float, seed: int | None = None):
    """Uniform i.i.d. transmitter and receiver positions on ``[0, aperture]``."""
    if aperture <= 0:
        raise ValueError("aperture must be positive")
    rng = np.random.default_rng(seed)
    return rng.uniform(0, aperture, num_tx), rng.uniform(0, aperture, num_rx)


def ula_array(num_tx: int, num_rx: int, dense: str = "rx"):
    """Virtual-ULA layout in wavelengths.

    ``dense="rx"``: receivers at ``q/2`` and transmitters at ``R m / 2``.
    ``dense="tx"`` swaps the roles (transmitters at ``m/2``, receivers at
    ``T q / 2``), the layout for which the range-azimuth aliasing of grid
    carriers is exact.
    """
    if dense == "rx":
        return np.arange(num_tx) * num_rx / 2, np.arange(num_rx) / 2
    if dense == "tx":
        return np.arange(num_tx) / 2, np.arange(num_rx) * num_tx / 2
    raise ValueError(f"dense must be 'rx' or 'tx', got {dense!r}")


# -- waveform banks -----------------------------------------------------------


@dataclass(frozen=True)
class WaveformBank:
    """Per-transmitter pulse family.

    FDMA banks carry carriers and a low-pass envelope; CDMA banks carry a
    unit-modulus code matrix ``codes`` (T x N_c) sharing one band of width
    ``T * B_h`` so that both families occupy the same total bandwidth.
    """

    family: Family
    carriers: np.ndarray
    envelope: EnvelopeSpectrum | None = None
    codes: np.ndarray | None = None
    chip_duration: float | None = None
    max_xcorr: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "carriers", np.asarray(self.carriers, dtype=float))

    @property
    def num_tx(self) -> int:
        return self.carriers.size

    def spectra(self, config: RadarConfig) -> np.ndarray:
        """``H_m(2 pi k / tau)`` on the global bins, shape ``(T, T N)``."""
        G = config.total_bins
        N = config.num_bins
        T = config.num_tx
        if self.family is Family.FDMA:
            env = self.envelope if self.envelope is not None else flat_envelope(config)
            H = np.zeros((T, G), dtype=complex)
            for m, f in enumerate(self.carriers):
                start = int(round(f * config.pri)) + G // 2 - N // 2
                if start < 0 or start + N > G:
                    raise BandOverflow(f"transmitter {m} band [{start}, {start + N}) outside [0, {G})")
                H[m, start : start + N] = env.values
            return H
        codes = self.codes
        n_chips = codes.shape[1]
        chip = self.chip_duration if self.chip_duration is not None else config.pri / G
        if n_chips * chip > config.pri * (1 + 1e-9):
            raise ValueError("code longer than the PRI")
        k = np.arange(G) - G // 2
        # code spectrum: sum_u w_u exp(-j 2 pi k u chip / tau)
        H = codes @ np.exp(-2j * np.pi * np.outer(np.arange(n_chips), k) * chip / config.pri)
        if self.envelope is not None:
            H = H * self.envelope.values[None, :]
        norm = np.sqrt(np.sum(np.abs(H) ** 2, axis=1, keepdims=True) / config.pri)
        return H / norm

    def to_dict(self) -> dict:
        d = {"family": self.family.value, "carriers": self.carriers.tolist()}
        if self.codes is not None:
            d["codes_re"] = self.codes.real.tolist()
            d["codes_im"] = self.codes.imag.tolist()
            d["chip_duration"] = self.chip_duration
            d["max_xcorr"] = self.max_xcorr
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "WaveformBank":
        codes = None
        if "codes_re" in d:
            codes = np.array(d["codes_re"]) + 1j * np.array(d["codes_im"])
        return cls(Family(d["family"]), d["carriers"], codes=codes,
                   chip_duration=d.get("chip_duration"), max_xcorr=d.get("max_xcorr"))


def fdma_bank(config: RadarConfig, envelope: EnvelopeSpectrum | None = None) -> WaveformBank:
    return WaveformBank(Family.FDMA, np.asarray(config.tx_carriers), envelope=envelope)


def cdma_bank(codes: np.ndarray, chip_duration: float | None = None) -> WaveformBank:
    codes = np.asarray(codes, dtype=complex)
    return WaveformBank(Family.CDMA, np.zeros(codes.shape[0]), codes=codes,
                        chip_duration=chip_duration, max_xcorr=max_cross_correlation(codes))


def max_cross_correlation(codes: np.ndarray) -> float:
    """Largest aperiodic cross-correlation magnitude over all pairs and lags.

    Normalized by the code length; 0 for a single code.
    """
    return float(_batch_xcorr(np.asarray(codes)[None])[0])


def _batch_xcorr(code_sets: np.ndarray) -> np.ndarray:
    # code_sets: (K, T, Nc) -> (K,) worst pairwise peak
    K, T, Nc = code_sets.shape
    if T < 2:
        return np.zeros(K)
    spec = np.fft.fft(code_sets, n=2 * Nc, axis=-1)
    i, j = np.triu_indices(T, k=1)
    xc = np.fft.ifft(spec[:, i, :] * np.conj(spec[:, j, :]), axis=-1)
    return np.abs(xc).max(axis=(1, 2)) / Nc


def cdma_code_search(
    num_tx: int, code_length: int, num_trials: int, seed: int | None = None, alphabet: int | None = 4
) -> WaveformBank:
    """Random-restart search for the code set with the lowest worst-case cross-correlation.

    Each candidate is a ``T x N_c`` matrix of unit-modulus phases, drawn from an
    ``alphabet``-ary PSK constellation (``None`` for continuous phases). Ties
    keep the earliest candidate.
    """
    if num_trials < 1:
        raise ValueError("num_trials must be >= 1")
    rng = np.random.default_rng(seed)
    best_val, best = np.inf, None
    chunk = max(1, min(num_trials, 2_000_000 // max(1, num_tx * num_tx * code_length)))
    done = 0
    while done < num_trials:
        k = min(chunk, num_trials - done)
        if alphabet is None:
            phases = rng.uniform(0, 2 * np.pi, size=(k, num_tx, code_length))
        else:
            phases = 2 * np.pi * rng.integers(0, alphabet, size=(k, num_tx, code_length)) / alphabet
        cands = np.exp(1j * phases)
        vals = _batch_xcorr(cands)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best = float(vals[i]), cands[i]
        done += k
    return WaveformBank(Family.CDMA, np.zeros(num_tx), codes=best, max_xcorr=best_val)


def export_codes_csv(bank: WaveformBank, path: str | Path) -> None:
    """Write the code matrix as ``tx,chip,re,im`` rows."""
    rows = ["tx,chip,re,im"]
    for m, row in enumerate(bank.codes):
        rows += [f"{m},{u},{w.real:.17g},{w.imag:.17g}" for u, w in enumerate(row)]
    Path(path).write_text("\n".join(rows) + "\n")
