"""Six closely spaced targets at full scale (T = R = 20, N = 500, P = 10), -10 dB SNR."""

import argparse
import json
import time

from fdma_mimo.channelizer import channelize
from fdma_mimo.config import config_hash
from fdma_mimo.dictionaries import build_dictionaries
from fdma_mimo.harness import match_targets
from fdma_mimo.presets import full_scale_config, six_target_scene
from fdma_mimo.recovery import doppler_focus, omp_focused
from fdma_mimo.synthesis import add_noise, synthesize
from fdma_mimo.waveforms import fdma_bank

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--seed", type=int, default=0)
p.add_argument("--snr", type=float, default=-10.0)
p.add_argument("--out", default="fig5_six_targets.json")
args = p.parse_args()

cfg = full_scale_config(args.seed)
scene = six_target_scene(cfg, args.seed)
bank = fdma_bank(cfg)
t0 = time.perf_counter()
rx = add_noise(synthesize(cfg, scene, bank), cfg, args.snr, args.seed)
phi = doppler_focus(channelize(rx, bank, cfg))
res = omp_focused(phi, build_dictionaries(cfg), len(scene))
hits = len(match_targets(scene, res, cfg))
elapsed = time.perf_counter() - t0
doc = {"config_hash": config_hash(cfg), "seed": args.seed, "truth": scene.to_dict(), "result": res.to_dict(),
       "hits": hits, "seconds": elapsed}
with open(args.out, "w") as fh:
    json.dump(doc, fh, indent=1)
print(f"{hits}/{len(scene)} targets recovered in {elapsed:.1f} s")
