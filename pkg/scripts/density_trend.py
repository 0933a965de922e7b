"""Fraction of n = 2 curves with two distinguished orbits, for growing height boxes."""
import argparse
import csv
import sys
import time

from selmer2.stats import distinguished_trend


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--budgets", default="10000,100000,1000000")
    args = ap.parse_args()
    budgets = [int(b) for b in args.budgets.split(",")]
    t0 = time.time()
    progress = lambda i: print(f"{i} tuples, {time.time() - t0:.0f}s", file=sys.stderr)
    pts, fallbacks = distinguished_trend(args.n, budgets, progress)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["budget", "X", "box", "curves", "count2", "fraction"])
    for p in pts:
        w.writerow([p.budget, p.X, p.box, p.curves, p.count2, f"{float(p.fraction):.6f}"])
    print(f"exact fallbacks: {fallbacks}, {time.time() - t0:.0f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
