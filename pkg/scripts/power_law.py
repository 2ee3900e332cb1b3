#!/usr/bin/env python3
"""Exponential vs power-law decay of P_l, and the matching singularity of 1 - Z."""
import argparse

from chaitin_ensemble import FibonacciCode, GeneralizedFibCode, decay_estimate, power_law_singularity_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l-max", type=int, default=4096)
    ap.add_argument("--pow2", default="6:12", help="eps grid 2^-a..2^-b")
    args = ap.parse_args()
    a, b = (int(x) for x in args.pow2.split(":"))
    grid = [2.0**-j for j in range(a, b + 1)]

    for code in (FibonacciCode(2), FibonacciCode(3)):
        fit = decay_estimate(code, 16, 400)
        print(f"{code.name:12s} {fit.model:12s} P_(l+1)/P_l = {fit.parameter:.6f}")

    code = GeneralizedFibCode()
    fit = decay_estimate(code, 64, args.l_max)
    sing = power_law_singularity_check(None, grid, code=code)
    print(f"{code.name:12s} {fit.model:12s} alpha = {fit.parameter:.6f}")
    print(f"  1 - Z ~ eps^s with s = {sing.exponent:.4f}; alpha - 1 = {fit.parameter - 1:.4f}")
    for eps, d in zip(sing.eps, sing.one_minus_z):
        print(f"  eps = {eps:.3e}  1 - Z = {d:.6e}")

    # synthetic members with an exact power law
    for alpha in (1.25, 1.5, 1.75, 2.0, 3.0):
        s = power_law_singularity_check(alpha, grid).exponent
        print(f"synthetic alpha = {alpha:4.2f}: fitted exponent {s:.4f}")


if __name__ == "__main__":
    main()
