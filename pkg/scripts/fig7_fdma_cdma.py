"""Hit rate against bandwidth: FDMA vs CDMA (fig7), non-iterative FDMA (fig10), CDMA only (fig2)."""

import argparse
from dataclasses import replace

from fdma_mimo.harness import run_experiment
from fdma_mimo.presets import DESK_A5_SPREAD, fig2_spec, fig7_spec, fig10_spec

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--which", choices=["fig2", "fig7", "fig10"], default="fig7")
p.add_argument("--trials", type=int, default=50)
p.add_argument("--mode", choices=["exact", "simplified"], default="exact")
p.add_argument("--threads", type=int, default=1)
p.add_argument("--out", default=None)
args = p.parse_args()

spec = {"fig2": fig2_spec, "fig7": fig7_spec, "fig10": fig10_spec}[args.which](args.trials)
spec = replace(spec, mode=args.mode)
rep = run_experiment(spec, args.out or f"out_{args.which}", args.threads)
for pt in rep.points:
    print(f"B_h={pt.value:.3e} relaxed margin {pt.value * DESK_A5_SPREAD:.2f} {pt.method}: {pt.hit_rate:.2f}")
