from dataclasses import replace

import numpy as np
import pytest

from fdma_mimo.cdma import cdma_map, cdma_process
from fdma_mimo.config import Target, TargetScene
from fdma_mimo.errors import FamilyMismatch
from fdma_mimo.harness import ConfigTemplate, ExperimentSpec, match_targets, random_scene, run_experiment
from fdma_mimo.presets import fig7_spec
from fdma_mimo.synthesis import synthesize
from fdma_mimo.waveforms import cdma_code_search, fdma_bank

from conftest import make_config


def test_rejects_fdma_bank():
    cfg = make_config()
    with pytest.raises(FamilyMismatch):
        cdma_map(synthesize(cfg, TargetScene()), fdma_bank(cfg), cfg)


def test_single_code_recovers_exactly():
    # one transmitter: no code cross-talk, so the classic chain is exact on-grid
    cfg = make_config(T=1, R=8, N=32, P=4, seed=1)
    bank = cdma_code_search(1, 32, 1, 0)
    for seed in range(20):
        scene = random_scene(cfg, 3, seed=seed, min_separation=2)
        res = cdma_process(synthesize(cfg, scene, bank), bank, cfg, 3)
        assert set(res.support) == set(map(tuple, scene.cells))


def test_map_shape_and_global_phase_invariance():
    cfg = make_config(seed=2)
    bank = cdma_code_search(cfg.num_tx, cfg.total_bins, 20, 0)
    scene = random_scene(cfg, 3, seed=2)
    a = cdma_map(synthesize(cfg, scene, bank), bank, cfg)
    b = cdma_map(synthesize(cfg, scene.scaled(np.exp(1.3j)), bank), bank, cfg)
    assert a.values.shape == (cfg.total_bins, cfg.num_channels, cfg.num_pulses)
    assert np.all(a.magnitude >= 0)
    assert np.allclose(a.magnitude, b.magnitude)


def _spec(bandwidth, aperture, mode="exact", methods=("cdma",)):
    """Small T = R = 4 sweep point used for the narrowband regime check."""
    t = ConfigTemplate(num_tx=4, num_rx=4, num_bins=16, channel_bandwidth=bandwidth, aperture=aperture)
    return ExperimentSpec(t, trials=20, num_targets=3, methods=methods, mode=mode, master_seed=3)


def test_narrowband_regime_hits_everything():
    # Z = 5 wavelengths, B_h = 100 kHz: 2 Z lambda / c * T B_h = 4e-4
    assert run_experiment(_spec(1e5, 5.0)).hit_rate == 1.0


def test_end_fire_targets_missed_at_wide_band():
    cfg = make_config(T=4, R=4, N=16, P=1, seed=0, aperture=8.0, bandwidth=2e9, mode="exact")
    bank = cdma_code_search(4, cfg.total_bins, 50, 0)
    TR = cfg.num_channels
    end_fire = [Target(1.0, 10, 1), Target(1.0, 40, TR - 1)]  # theta = -0.875, +0.875
    broadside = [Target(1.0, 25, TR // 2)]
    scene = TargetScene(tuple(end_fire + broadside))
    res = cdma_process(synthesize(cfg, scene, bank, "exact"), bank, cfg, 3)
    hit = {i for _, i in match_targets(scene, res, cfg)}
    assert 2 in hit and not {0, 1} <= hit


def test_matches_fdma_without_geometry_delay():
    # simplified synthesis removes the per-channel envelope delay; both chains then hit everything
    spec = replace(fig7_spec(trials=30), values=(5e6, 2e8), mode="simplified")
    rep = run_experiment(spec)
    # residual code cross-talk can still cost the odd CDMA target
    assert rep.rates("fdma") == [1.0, 1.0]
    assert np.allclose(rep.rates("cdma"), 1.0, atol=0.02)
