"""Range, azimuth and Doppler measurement matrices.

With ``c_m = f_m / B_h`` the per-transmitter factors are

* ``A^m[k, n] = exp(-j 2 pi (k - N/2) n / (T N)) * exp(-j 2 pi c_m n / T)``  (N x TN)
* ``B^m[q, r] = exp(j 2 pi beta_mq (-1 + 2 r / (T R)))``                     (R x TR)
* ``F[p, u]   = exp(-j 2 pi f^D_u p tau)``                                    (P x P)

so that ``Y^m = A^m X (B^m)^T`` and ``Z^m = (B^m kron A^m) X_D F^T``. Dense
range matrices are only materialized on request; the recovery code works
with the closed-form phases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RadarConfig, TargetScene, channel_beta
from .errors import IndexOutOfRange

DENSE_LIMIT = 10**7


@dataclass(frozen=True)
class DictionarySet:
    num_tx: int
    num_rx: int
    num_bins: int
    num_pulses: int
    pri: float
    carrier_ratio: np.ndarray  # f_m / B_h, shape (T,)
    beta: np.ndarray  # (T, R)

    @property
    def total_bins(self) -> int:
        return self.num_tx * self.num_bins

    @property
    def num_channels(self) -> int:
        return self.num_tx * self.num_rx

    # -- columns ------------------------------------------------------------

    def range_atom(self, m: int, n) -> np.ndarray:
        """Column(s) ``n`` of ``A^m``; shape ``(N,)`` or ``(N, len(n))``."""
        k = np.arange(self.num_bins) - self.num_bins / 2
        n = np.asarray(n)
        G = self.total_bins
        phase = np.multiply.outer(k, n) / G + self.carrier_ratio[m] * n / self.num_tx
        return np.exp(-2j * np.pi * phase)

    def azimuth_atom(self, m: int, r) -> np.ndarray:
        theta = -1.0 + 2.0 * np.asarray(r) / self.num_channels
        return np.exp(2j * np.pi * np.multiply.outer(self.beta[m], theta))

    def doppler_atom(self, u) -> np.ndarray:
        p = np.arange(self.num_pulses)
        fd_tau = -0.5 + np.asarray(u) / self.num_pulses  # f^D * tau
        return np.exp(-2j * np.pi * np.multiply.outer(p, fd_tau))

    # -- dense matrices -----------------------------------------------------

    def _guard(self, size: int) -> None:
        if size > DENSE_LIMIT:
            raise MemoryError(f"dense matrix of {size} entries exceeds DENSE_LIMIT={DENSE_LIMIT}")

    def range_matrix(self, m: int) -> np.ndarray:
        self._guard(self.num_bins * self.total_bins)
        return self.range_atom(m, np.arange(self.total_bins))

    def azimuth_matrix(self, m: int) -> np.ndarray:
        return self.azimuth_atom(m, np.arange(self.num_channels))

    def doppler_matrix(self) -> np.ndarray:
        return self.doppler_atom(np.arange(self.num_pulses))

    def stacked_range(self) -> np.ndarray:
        """``A = [A^0; A^1; ...]``, shape ``(T N, T N)``."""
        self._guard(self.total_bins**2)
        return np.vstack([self.range_matrix(m) for m in range(self.num_tx)])

    def stacked_azimuth(self) -> np.ndarray:
        """``B = [B^0; B^1; ...]``, shape ``(T R, T R)``."""
        return np.vstack([self.azimuth_matrix(m) for m in range(self.num_tx)])

    # -- model --------------------------------------------------------------

    def model(self, scene: TargetScene) -> np.ndarray:
        """Noiseless channel coefficients ``y[m, q, p, k]`` of an on-grid scene."""
        T, R, P, N = self.num_tx, self.num_rx, self.num_pulses, self.num_bins
        y = np.zeros((T, R, P, N), dtype=complex)
        if len(scene) == 0:
            return y
        c = scene.cells
        f = self.doppler_atom(c[:, 2]) * scene.amplitudes  # (P, L)
        for m in range(T):
            a = self.range_atom(m, c[:, 0])  # (N, L)
            b = self.azimuth_atom(m, c[:, 1])  # (R, L)
            y[m] = np.einsum("kl,ql,pl->qpk", a, b, f)
        return y


def build_dictionaries(config: RadarConfig, beta_mode: str = "full") -> DictionarySet:
    """Dictionaries for ``config``.

    ``beta_mode="full"`` uses ``(xi + zeta)(f_m lambda / c + 1)``;
    ``"simplified"`` drops the carrier term (``beta = xi + zeta``).
    """
    config.band_indices(require_distinct=False)
    if beta_mode == "full":
        beta = config.beta
    elif beta_mode == "simplified":
        beta = channel_beta(config.tx_positions, config.rx_positions, np.zeros(config.num_tx), config.wavelength)
    else:
        raise ValueError(f"unknown beta_mode {beta_mode!r}")
    return DictionarySet(
        num_tx=config.num_tx,
        num_rx=config.num_rx,
        num_bins=config.num_bins,
        num_pulses=config.num_pulses,
        pri=config.pri,
        carrier_ratio=np.asarray(config.tx_carriers) / config.channel_bandwidth,
        beta=beta,
    )


def atom(ds: DictionarySet, m: int, n: int, p_az: int, u: int) -> np.ndarray:
    """``f_u kron b^m_{p_az} kron a^m_n``: one column of ``(B^m kron A^m)`` spread over pulses.

    Indexed as ``p * N R + q * N + k``, matching ``vec(Z^m)``.
    """
    for idx, hi, name in ((n, ds.total_bins, "range"), (p_az, ds.num_channels, "azimuth"), (u, ds.num_pulses, "doppler")):
        if not 0 <= idx < hi:
            raise IndexOutOfRange(f"{name} index {idx} not in [0, {hi})")
    return np.kron(ds.doppler_atom(u), np.kron(ds.azimuth_atom(m, p_az), ds.range_atom(m, n)))


def estimates_for(config_or_dicts, cells) -> list[tuple[float, float, float]]:
    """Physical ``(delay, azimuth sine, Doppler)`` of grid cells."""
    d = config_or_dicts
    G = d.total_bins
    P = d.num_pulses
    out = []
    for s, r, u in cells:
        out.append((d.pri * s / G, -1.0 + 2.0 * r / d.num_channels, -0.5 / d.pri + u / (P * d.pri)))
    return out

