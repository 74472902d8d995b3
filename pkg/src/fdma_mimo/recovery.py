"""Joint-channel sparse recovery with Doppler focusing.

The projection ``Psi^nu = A^H R^nu conj(B)`` is never formed with dense
matrices. For each transmitter the range part is a zero-padded length-``TN``
inverse FFT followed by a per-transmitter phase ramp; the azimuth part is a
single ``(TN x TR) @ (TR x TR)`` product over all channels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .channelizer import ChannelCoefficients
from .dictionaries import DictionarySet, estimates_for
from .errors import SingularLS


@dataclass(frozen=True)
class FocusedMap:
    """Doppler-focused coefficients ``phi[m, nu, k, q]``, shape ``(T, P, N, R)``."""

    phi: np.ndarray


@dataclass(frozen=True)
class RecoveryResult:
    support: tuple[tuple[int, int, int], ...]  # (delay s, azimuth r, Doppler u)
    amplitudes: np.ndarray
    residual_norms: tuple[float, ...] = ()
    estimates: tuple[tuple[float, float, float], ...] = ()
    method: str = "fdma"
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "support": [list(map(int, c)) for c in self.support],
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
            "estimates": [
                {"delay_s": e[0], "azimuth_sine": e[1], "doppler_hz": e[2]} for e in self.estimates
            ],
            "residual_norms": [float(v) for v in self.residual_norms],
            **self.extra,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def _as_array(y) -> np.ndarray:
    return y.y if isinstance(y, ChannelCoefficients) else np.asarray(y)


def doppler_focus(y) -> FocusedMap:
    """``phi^nu = sum_p y^p exp(j 2 pi f^D_nu p tau)`` for every grid Doppler ``nu``.

    Accepts ``ChannelCoefficients`` or a ``(T, R, P, N)`` array.
    """
    arr = _as_array(y)
    P = arr.shape[2]
    # f^D_nu p tau = -p/2 + nu p / P
    sign = np.cos(np.pi * np.arange(P))
    phi = P * scipy.fft.ifft(arr * sign[None, None, :, None], axis=2)
    return FocusedMap(np.ascontiguousarray(phi.transpose(0, 2, 3, 1)))


class Projector:
    """Evaluates ``A^H R conj(B)`` slice by slice for a fixed dictionary set."""

    def __init__(self, ds: DictionarySet):
        self.ds = ds
        G = ds.total_bins
        s = np.arange(G)
        # conj(A^m[k, s]) = exp(j 2 pi k s / G) * exp(j 2 pi (c_m - 1/2) s / T), k = 0..N-1
        self.ramp = np.exp(2j * np.pi * np.outer(ds.carrier_ratio - 0.5, s) / ds.num_tx)
        self.conj_b = np.conj(ds.stacked_azimuth())  # rows (m, q), columns r

    def project_slice(self, resid: np.ndarray) -> np.ndarray:
        """``resid`` is ``(T, N, R)``; returns ``Psi`` indexed ``[r, s]``."""
        ds = self.ds
        G = ds.total_bins
        u = scipy.fft.ifft(resid, n=G, axis=1) * G
        u *= self.ramp[:, :, None]
        u = u.transpose(1, 0, 2).reshape(G, ds.num_channels)
        return self.conj_b.T @ u.T

    def magnitude(self, phi: np.ndarray) -> np.ndarray:
        """``|Psi|`` for every Doppler slice, shape ``(P, TR, TN)``."""
        P = phi.shape[1]
        out = np.empty((P, self.ds.num_channels, self.ds.total_bins))
        for nu in range(P):
            out[nu] = np.abs(self.project_slice(phi[:, nu]))
        return out

    def complex_map(self, phi: np.ndarray) -> np.ndarray:
        return np.stack([self.project_slice(phi[:, nu]) for nu in range(phi.shape[1])])


def atom_block(ds: DictionarySet, s: int, r: int) -> np.ndarray:
    """``a^m_s (b^m_r)^T`` for all transmitters, shape ``(T, N, R)``."""
    return np.stack([np.outer(ds.range_atom(m, s), ds.azimuth_atom(m, r)) for m in range(ds.num_tx)])


def _refit(phi: np.ndarray, ds: DictionarySet, support: list) -> tuple[np.ndarray, np.ndarray]:
    """Least squares over the selected atoms; returns (amplitudes, residual).

    Atoms on different Doppler slices are orthogonal, so the fit splits into one
    small problem per slice.
    """
    P = phi.shape[1]
    amps = np.zeros(len(support), dtype=complex)
    resid = phi.copy()
    by_u: dict[int, list[int]] = {}
    for i, (_, _, u) in enumerate(support):
        by_u.setdefault(u, []).append(i)
    for u, members in by_u.items():
        D = np.stack([P * atom_block(ds, support[i][0], support[i][1]).ravel() for i in members], axis=1)
        b = phi[:, u].ravel()
        coef, _, rank, _ = np.linalg.lstsq(D, b, rcond=None)
        if rank < len(members):
            raise SingularLS(f"selected atoms on Doppler slice {u} are linearly dependent")
        amps[members] = coef
        resid[:, u] = (b - D @ coef).reshape(phi.shape[0], phi.shape[2], phi.shape[3])
    return amps, resid


def _result(ds, support, amps, norms, method, extra=None) -> RecoveryResult:
    return RecoveryResult(
        support=tuple(tuple(int(v) for v in c) for c in support),
        amplitudes=np.asarray(amps, dtype=complex),
        residual_norms=tuple(norms),
        estimates=tuple(estimates_for(ds, support)),
        method=method,
        extra=extra or {},
    )


def omp_focused(phi, ds: DictionarySet, num_targets: int, tol: float | None = None) -> RecoveryResult:
    """Simultaneous OMP over all channels on Doppler-focused data.

    Stops after ``num_targets`` atoms, or earlier once the residual norm drops
    below ``tol`` (off by default). Ties in the correlation map go to the
    smallest ``(u, r, s)``.
    """
    if num_targets < 1:
        raise ValueError("num_targets must be >= 1")
    phi = phi.phi if isinstance(phi, FocusedMap) else np.asarray(phi)
    P = phi.shape[1]
    proj = Projector(ds)
    resid = phi
    support: list[tuple[int, int, int]] = []
    amps = np.zeros(0, dtype=complex)
    norms = [float(np.linalg.norm(phi) / np.sqrt(P))]
    for _ in range(num_targets):
        best_val, best = -1.0, None
        for nu in range(P):
            mag = np.abs(proj.project_slice(resid[:, nu]))
            for s, r, u in support:
                if u == nu:
                    mag[r, s] = -1.0
            flat = int(np.argmax(mag))
            if mag.flat[flat] > best_val:
                best_val = float(mag.flat[flat])
                r, s = divmod(flat, ds.total_bins)
                best = (s, r, nu)
        support.append(best)
        amps, resid = _refit(phi, ds, support)
        norms.append(float(np.linalg.norm(resid) / np.sqrt(P)))
        if tol is not None and norms[-1] <= tol:
            break
    return _result(ds, support, amps, norms, "fdma")


def omp2d(Y, ds: DictionarySet, num_targets: int, tol: float | None = None) -> RecoveryResult:
    """Range-azimuth recovery from ``Y^m`` (each ``N x R``), single pulse."""
    y = np.stack([np.asarray(Ym).T for Ym in Y])[:, :, None, :]  # (T, R, 1, N)
    return omp_focused(doppler_focus(y), ds, num_targets, tol)


def omp3d(Z, ds: DictionarySet, num_targets: int, tol: float | None = None) -> RecoveryResult:
    """Range-azimuth-Doppler recovery from ``Z^m`` (each ``N R x P``, row ``k + q N``)."""
    N, R = ds.num_bins, ds.num_rx
    y = np.stack([np.asarray(Zm).reshape(R, N, -1).transpose(0, 2, 1) for Zm in Z])
    return omp_focused(doppler_focus(y), ds, num_targets, tol)


def recover(coeffs, ds: DictionarySet, num_targets: int, iterative: bool = True, **kw) -> RecoveryResult:
    """Focus channel coefficients and run iterative or single-pass recovery."""
    phi = doppler_focus(coeffs)
    if iterative:
        return omp_focused(phi, ds, num_targets, **kw)
    return omp_first_iteration(phi, ds, num_targets, **kw)


def pick_peaks(mag: np.ndarray, count: int, radius: int = 1) -> list[tuple[int, ...]]:
    """Greedy selection of the ``count`` largest cells of ``mag``.

    After each pick, its ``+-radius`` box (clipped at the edges) is excluded.
    ``mag`` is modified in place. Returns indices in ``mag``'s axis order.
    """
    picks = []
    for _ in range(count):
        flat = int(np.argmax(mag))
        idx = np.unravel_index(flat, mag.shape)
        picks.append(tuple(int(i) for i in idx))
        box = tuple(slice(max(0, i - radius), i + radius + 1) for i in idx)
        mag[box] = -np.inf
    return picks


def omp_first_iteration(phi, ds: DictionarySet, num_targets: int, radius: int = 1) -> RecoveryResult:
    """Single-pass detection: the ``num_targets`` strongest distinct peaks of the first projection.

    No residual subtraction; each amplitude is the matched-filter estimate of
    its own cell.
    """
    phi = phi.phi if isinstance(phi, FocusedMap) else np.asarray(phi)
    P = phi.shape[1]
    mag = Projector(ds).magnitude(phi)
    support = [(s, r, u) for u, r, s in pick_peaks(mag, num_targets, radius)]
    energy = P * ds.num_tx * ds.num_bins * ds.num_rx
    amps = np.array([np.vdot(atom_block(ds, s, r), phi[:, u]) / energy for s, r, u in support])
    return _result(ds, support, amps, [float(np.linalg.norm(phi) / np.sqrt(P))], "fdma-nonit")
