#!/usr/bin/env python3
"""Wall time of the three estimators as the dimension k doubles (fixed sample count)."""
import argparse
import time

import numpy as np

from orthantfpt import (
    Boundary, OrthantProblem, RandomStream, arfima_covariance, cholesky, estimate_orthant_fpt,
    genz_estimate, ghk_estimate, toeplitz_matrix,
)


def timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--d", type=float, default=0.2)
    ap.add_argument("--kmax", type=int, default=512)
    args = ap.parse_args()

    b = Boundary.constant(1.0)
    print(f"{'k':>5} {'fpt s':>8} {'ghk s':>8} {'genz s':>8}")
    k = 16
    while k <= args.kmax:
        cov = arfima_covariance(args.d, k)
        chol = cholesky(toeplitz_matrix(cov, k))
        s = b.values(k)
        t_fpt = timed(lambda: estimate_orthant_fpt(OrthantProblem(cov, b, k), args.samples,
                                                   RandomStream(1), workers=1))
        t_ghk = timed(lambda: ghk_estimate(s, chol, args.samples, RandomStream(2)))
        # fixed budget: tolerance unreachable so every run uses exactly `samples` points
        t_genz = timed(lambda: genz_estimate(s, chol, 1e-12, args.samples, RandomStream(3)))
        print(f"{k:>5} {t_fpt:8.3f} {t_ghk:8.3f} {t_genz:8.3f}")
        k *= 2


if __name__ == "__main__":
    main()
