"""Two-target hit rate against RCS ratio for iterative and single-pass FDMA recovery."""

import argparse

from fdma_mimo.harness import run_experiment
from fdma_mimo.presets import fig9_spec

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--trials", type=int, default=50)
p.add_argument("--values", type=float, nargs="+", default=[0, 4, 8, 12, 16, 20])
p.add_argument("--threads", type=int, default=1)
p.add_argument("--out", default="out_fig9")
args = p.parse_args()

rep = run_experiment(fig9_spec(args.trials, tuple(args.values)), args.out, args.threads)
for pt in rep.points:
    print(f"{pt.value:5.1f} dB {pt.method:10s} {pt.hit_rate:.2f}")
