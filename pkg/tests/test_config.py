import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdma_mimo.config import (RadarConfig, Target, TargetScene, build_config, config_hash, load_config,
                              make_grids, nearest_indices, save_config, validate_config)
from fdma_mimo.errors import CarrierOffGrid, ConfigError, NonIntegerBinCount
from fdma_mimo.presets import full_scale_config

from conftest import make_config


def test_full_scale_margins():
    # 2 Z lambda / c = 2 * 200 * 0.03 / 3e8 = 4e-8 s
    cfg = full_scale_config(0)
    rep = validate_config(cfg, max_velocity=30, max_range=10e3)
    assert rep.a5_strict == pytest.approx(4.0)
    assert rep.a5_relaxed == pytest.approx(0.2)
    assert not rep.holds("a5_strict")
    # a margin of 0.2 is not "much less than" at the default 0.1 ratio
    assert not rep.holds("a5_relaxed")
    assert validate_config(cfg, 30, 10e3, threshold=0.5).holds("a5_relaxed")


def test_zero_velocity_margins():
    rep = validate_config(make_config(), 0.0, 1e3)
    assert rep.a2_far == rep.a3_delay == rep.a3_doppler == rep.a4_accel == 0.0
    assert all(rep.holds(n) for n in ("a2_far", "a3_delay", "a3_doppler", "a4_accel"))


def test_odd_bin_count_rejected():
    cfg = RadarConfig(2, 2, 1, 1e-3, 1e3, 1e9, (0, 1), (0, 1), (-500.0, 500.0), 2.0)
    with pytest.raises(NonIntegerBinCount):
        validate_config(cfg, 0, 1)


def test_fractional_bin_count_rejected():
    cfg = build_config(2, 2, 12)
    with pytest.raises(NonIntegerBinCount):
        RadarConfig(**{**cfg.to_dict(), "pri": 12.5 / 5e6}).num_bins


@pytest.mark.parametrize("carriers", [(0.0, 5e6), (-2.5e6, -2.5e6), (-2.5e6, 7.5e6), (-2.4e6, 2.5e6)])
def test_carriers_off_grid(carriers):
    cfg = build_config(2, 2, 12, tx_carriers=carriers)
    with pytest.raises(CarrierOffGrid):
        cfg.check()


def test_positions_outside_aperture():
    with pytest.raises(ConfigError):
        build_config(2, 2, 12, tx_positions=(0, 5), rx_positions=(0, 1), aperture=2).check()


@pytest.mark.parametrize("bad", [{"num_tx": 0}, {"num_pulses": 0}, {"pri": -1.0}])
def test_constructor_rejects(bad):
    d = build_config(2, 2, 12).to_dict()
    d.update(bad)
    with pytest.raises(ConfigError):
        RadarConfig.from_dict(d)


def test_fc_tau_warning():
    cfg = build_config(2, 2, 12, carrier_freq=10e9 + 1234.5)  # f_c tau = 24000.003
    with pytest.warns(UserWarning):
        rep = validate_config(cfg, 0, 1)
    assert rep.warnings


def test_full_scale_grid_steps():
    cfg = full_scale_config(0)
    g = make_grids(cfg)
    assert g.delay[1] - g.delay[0] == pytest.approx(10e-9)
    assert g.azimuth[1] - g.azimuth[0] == pytest.approx(0.005)
    assert np.allclose(np.diff(g.doppler), 1e3)
    assert g.doppler[0] == pytest.approx(-5e3) and g.doppler[-1] == pytest.approx(4e3)


def test_grid_origins():
    cfg = make_config(P=6)
    g = make_grids(cfg)
    assert g.delay[0] == 0.0
    assert g.azimuth[cfg.num_channels // 2] == 0.0
    assert g.doppler[cfg.num_pulses // 2] == 0.0


@given(T=st.integers(1, 6), R=st.integers(1, 6), N=st.integers(1, 20).map(lambda n: 2 * n), P=st.integers(1, 9))
def test_grid_round_trip(T, R, N, P):
    cfg = build_config(T, R, N, P)
    g = make_grids(cfg)
    s, r, u = nearest_indices(cfg, g.delay, g.azimuth, g.doppler)
    assert np.array_equal(s, np.arange(T * N))
    assert np.array_equal(r, np.arange(T * R))
    assert np.array_equal(u, np.arange(P))


@given(seed=st.integers(0, 1000))
def test_margins_linear_in_bandwidth(seed):
    base = make_config(seed=seed, bandwidth=1e6)
    twice = make_config(seed=seed, bandwidth=2e6)
    a = validate_config(base, 10, 1e3)
    b = validate_config(twice, 10, 1e3)
    assert b.a5_strict == pytest.approx(2 * a.a5_strict)
    assert b.a5_relaxed == pytest.approx(2 * a.a5_relaxed)


@given(seed=st.integers(0, 10**6))
def test_random_positions_within_aperture(seed):
    cfg = make_config(seed=seed)
    assert max(cfg.tx_positions + cfg.rx_positions) <= cfg.aperture
    assert cfg.aperture == cfg.num_tx * cfg.num_rx / 2


def test_config_file_round_trip(tmp_path):
    cfg = make_config(seed=4)
    save_config(cfg, tmp_path / "c.json", seed=4)
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["seed"] == 4 and doc["config_hash"] == config_hash(cfg)
    assert doc["tx_positions_m"][0] == pytest.approx(cfg.tx_positions[0] * 0.03)
    assert load_config(tmp_path / "c.json") == cfg


def test_hash_is_content_based():
    assert config_hash(make_config(seed=1)) == config_hash(make_config(seed=1))
    assert config_hash(make_config(seed=1)) != config_hash(make_config(seed=2))


def test_scene_rejects_duplicate_cells():
    with pytest.raises(ValueError):
        TargetScene((Target(1, 1, 1, 0), Target(2, 1, 1, 0)))


def test_scene_off_grid():
    cfg = make_config()
    with pytest.raises(ValueError):
        TargetScene((Target(1, cfg.total_bins, 0, 0),)).check(cfg)


def test_scene_dict_round_trip():
    sc = TargetScene((Target(1 + 2j, 3, 4, 5), Target(-1j, 0, 0, 0)), seed=9)
    assert TargetScene.from_dict(json.loads(json.dumps(sc.to_dict()))) == sc


def test_a2_infinite_for_zero_range():
    assert math.isinf(validate_config(make_config(), 1.0, 0.0).a2_far)
