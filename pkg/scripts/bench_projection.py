"""Wall time of one full-grid projection and of the synthesis at full scale."""

import argparse
import time

import numpy as np

from fdma_mimo.dictionaries import build_dictionaries
from fdma_mimo.presets import full_scale_config, six_target_scene
from fdma_mimo.recovery import Projector
from fdma_mimo.synthesis import synthesize
from fdma_mimo.waveforms import fdma_bank

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--repeats", type=int, default=3)
args = p.parse_args()

cfg = full_scale_config(0)
ds = build_dictionaries(cfg)
proj = Projector(ds)
rng = np.random.default_rng(0)
shape = (cfg.num_tx, cfg.num_pulses, cfg.num_bins, cfg.num_rx)
phi = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
for _ in range(args.repeats):
    t0 = time.perf_counter()
    mag = proj.magnitude(phi)
    print(f"projection over {mag.size:.1e} cells: {time.perf_counter() - t0:.2f} s")
t0 = time.perf_counter()
synthesize(cfg, six_target_scene(cfg), fdma_bank(cfg))
print(f"exact synthesis, 6 targets: {time.perf_counter() - t0:.2f} s")
