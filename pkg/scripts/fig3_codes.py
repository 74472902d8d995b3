"""Max cross-correlation of the best random CDMA code bank against the number of transmitters."""

import argparse
import csv

from fdma_mimo.waveforms import cdma_code_search

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--code-length", type=int, default=128)
p.add_argument("--trials", type=int, default=1000)
p.add_argument("--max-tx", type=int, default=16)
p.add_argument("--seed", type=int, default=3)
p.add_argument("--out", default="fig3_codes.csv")
args = p.parse_args()

with open(args.out, "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["num_tx", "alphabet", "max_xcorr"])
    for T in range(2, args.max_tx + 1):
        for alphabet in (2, 4, None):
            bank = cdma_code_search(T, args.code_length, args.trials, args.seed, alphabet)
            w.writerow([T, alphabet or "continuous", f"{bank.max_xcorr:.6f}"])
            print(T, alphabet or "continuous", round(bank.max_xcorr, 4))
