#!/usr/bin/env python3
"""Writes a synthetic 87-bank balance-sheet file in the EBA-style CSV layout.

Sizes are lognormal (EUR millions), interbank shares 5-20% of the balance
sheet and equity 3-8%. Interbank liabilities are rescaled so the two
interbank totals match. Deterministic for a given --seed.
"""
import argparse
import csv
import math
import random


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2011)
    ap.add_argument("--banks", type=int, default=87)
    ap.add_argument("--out", default="data/eba_synthetic_87.csv")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    rows = []
    for i in range(args.banks):
        total = math.exp(rng.gauss(math.log(1.5e5), 1.1))
        ib_assets = total * rng.uniform(0.05, 0.20)
        ib_liab = total * rng.uniform(0.05, 0.20)
        equity = total * rng.uniform(0.03, 0.08)
        rows.append([f"EU{i + 1:03d}", total, ib_assets, ib_liab, equity])

    scale = sum(r[2] for r in rows) / sum(r[3] for r in rows)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["bank_id", "total_assets", "interbank_assets",
                    "interbank_liabilities", "external_liabilities"])
        for bank, total, ib_assets, ib_liab, equity in rows:
            ib_liab *= scale
            external = total - equity - ib_liab
            w.writerow([bank, f"{total:.1f}", f"{ib_assets:.1f}", f"{ib_liab:.1f}",
                        f"{external:.1f}"])


if __name__ == "__main__":
    main()
