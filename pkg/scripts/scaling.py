"""Tikhonov vs augmented Lagrangian on random Toeplitz matrices of growing
size. Writes per-size medians for both solvers plus the per-instance
relative gap between their distances.

    python scripts/scaling.py --sizes 50 100 200 500 --samples 40 --out scaling.csv
"""

import argparse
import csv

import numpy as np

from structsing.algorithms import SolverConfig
from structsing.bench import collect


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--samples", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="scaling.csv")
    args = ap.parse_args()

    runs = {
        alg: collect(args.sizes, args.samples, "toeplitz", SolverConfig(algorithm=alg),
                     seed=args.seed, workers=args.workers)
        for alg in ("tikhonov", "augmented-lagrangian")
    }
    rows = []
    for n in args.sizes:
        tk = [r for r in runs["tikhonov"] if r.n == n]
        al = [r for r in runs["augmented-lagrangian"] if r.n == n]
        gap = [abs(a.distance - t.distance) / t.distance for a, t in zip(al, tk)]
        row = {"size": n}
        for name, recs in (("tikhonov", tk), ("lagrangian", al)):
            row[f"{name}_median_distance"] = float(np.median([r.distance for r in recs]))
            row[f"{name}_median_iterations"] = float(np.median([r.inner_iterations for r in recs]))
            row[f"{name}_median_time_s"] = float(np.median([r.wall_time_s for r in recs]))
        row["max_relative_gap"] = float(max(gap))
        rows.append(row)
        print(
            f"n={n:<4d} iterations tikhonov {row['tikhonov_median_iterations']:g} "
            f"lagrangian {row['lagrangian_median_iterations']:g}  max gap {row['max_relative_gap']:.1e}"
        )
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
