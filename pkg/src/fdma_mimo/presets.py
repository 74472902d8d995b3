"""Named configurations, scenes and experiment recipes for the figure scripts."""

from __future__ import annotations

import numpy as np

from .config import RadarConfig, SynthesisMode, Target, TargetScene
from .harness import ConfigTemplate, ExperimentSpec

DESK_TRIALS = 50

# T = R = 8 random array, aperture TR/2 wavelengths at 10 GHz: 2 Z lambda / c = 6.4 ns.
DESK_TEMPLATE = ConfigTemplate(num_tx=8, num_rx=8, num_bins=16)
DESK_A5_SPREAD = 2 * (8 * 8 / 2) * 0.03 / 3e8

FIG7_RELAXED_MARGINS = (0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0)


def full_scale_config(seed: int = 0, num_pulses: int = 10, mode=SynthesisMode.EXACT) -> RadarConfig:
    """T = R = 20, tau = 100 us, B_h = 5 MHz, f_c = 10 GHz, random array on [0, 200]."""
    t = ConfigTemplate(num_tx=20, num_rx=20, num_bins=500, num_pulses=num_pulses, aperture=200.0)
    seeds = np.random.SeedSequence(seed).generate_state(2)
    return t.build(int(seeds[0]), int(seeds[1]), mode)


def six_target_scene(config: RadarConfig, seed: int = 0) -> TargetScene:
    """Close-range, close-azimuth and close-Doppler pairs, each exactly one bin apart.

    With a single pulse the Doppler pair becomes a diagonal range-azimuth pair.
    """
    G, TR, P = config.total_bins, config.num_channels, config.num_pulses
    rng = np.random.default_rng(seed)
    phase = np.exp(2j * np.pi * rng.random(6))
    s0, r0, u0 = G // 4, TR // 4, P // 4
    s1, r1, u1 = G // 2, min(3 * TR // 4, TR - 2), P // 2
    s2, r2, u2 = 3 * G // 4, TR // 2, max(0, min((3 * P) // 4, P - 2))
    third = (s2, r2, u2 + 1) if P > 1 else (s2 + 1, r2 + 1, 0)
    cells = [
        (s0, r0, u0), (s0 + 1, r0, u0),
        (s1, r1, u1), (s1, r1 + 1, u1),
        (s2, r2, u2), third,
    ]
    return TargetScene(tuple(Target(complex(a), *c) for a, c in zip(phase, cells)), seed)


def fig7_spec(trials: int = DESK_TRIALS, methods=("fdma", "cdma"), master_seed: int = 7) -> ExperimentSpec:
    """Noiseless FDMA vs CDMA hit rate with B_h swept over the relaxed narrowband margin."""
    values = tuple(m / DESK_A5_SPREAD for m in FIG7_RELAXED_MARGINS)
    return ExperimentSpec(DESK_TEMPLATE, sweep="bandwidth", values=values, trials=trials, num_targets=5,
                          methods=methods, snr_db=None, mode="exact", master_seed=master_seed)


def fig10_spec(trials: int = DESK_TRIALS, master_seed: int = 10) -> ExperimentSpec:
    return fig7_spec(trials, ("fdma-nonit", "cdma"), master_seed)


def fig2_spec(trials: int = DESK_TRIALS, master_seed: int = 2) -> ExperimentSpec:
    """CDMA alone against bandwidth, as the narrowband-assumption motivation."""
    return fig7_spec(trials, ("cdma",), master_seed)


# T=4, R=8, N=4096, P=32: processing gain T N R P ~ 4.2e6, enough to lift a
# target 40 dB below its neighbour out of -10 dB per-sample noise.
FIG9_TEMPLATE = ConfigTemplate(num_tx=4, num_rx=8, num_bins=4096, num_pulses=32)


def fig9_spec(trials: int = DESK_TRIALS, values=(0.0, 4.0, 8.0, 12.0, 16.0, 20.0), master_seed: int = 9) -> ExperimentSpec:
    """Two targets at -10 dB SNR, RCS ratio swept; iterative vs single-pass FDMA."""
    return ExperimentSpec(FIG9_TEMPLATE, sweep="rcs_ratio", values=values, trials=trials,
                          methods=("fdma", "fdma-nonit"), snr_db=-10.0, mode="exact", master_seed=master_seed)
