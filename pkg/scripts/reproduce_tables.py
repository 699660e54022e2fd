#!/usr/bin/env python3
"""Rerun both published tables: per-k FPT with the listed N_S, Genz and GHK, side by side."""
import argparse

from orthantfpt.cli import RunConfig, emit_csv, run
from orthantfpt.reference_tables import TABLES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--tolerance", type=float, default=1e-4)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--csv-prefix", default=None, help="write <prefix>_table<N>.csv")
    args = ap.parse_args()

    for which, table in TABLES.items():
        rows, _ = run(RunConfig(method="table", which=which, k_values=tuple(range(20, 41)),
                                seed=args.seed, tolerance=args.tolerance, workers=args.workers))
        by = {(r.method, r.k): r for r in rows}
        print(f"\nTable {which}: d={table.d}, boundary {table.boundary.describe()}")
        print(f"{'k':>3} | {'genz':>7} {'ref':>7} {'sec':>6} | {'ghk':>7} {'ref':>7} {'sec':>6} | "
              f"{'fpt':>7} {'ref':>7} {'sec':>6} {'N_S':>5}")
        for k in range(20, 41):
            g, h, f = by["genz", k], by["ghk", k], by["fpt", k]
            ref_g, ref_h, ref_f, n_s = table.rows[k]
            star = "*" if "eval-cap-hit" in g.flags else " "
            print(f"{k:>3} | {g.estimate:.4f}{star} {ref_g:.4f} {g.seconds:6.3f} | "
                  f"{h.estimate:.4f} {ref_h:.4f} {h.seconds:6.3f} | "
                  f"{f.estimate:.4f} {ref_f:.4f} {f.seconds:6.3f} {n_s:>5}")
        if args.csv_prefix:
            emit_csv(rows, f"{args.csv_prefix}_table{which}.csv")


if __name__ == "__main__":
    main()
