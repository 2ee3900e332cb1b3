#!/usr/bin/env python3
"""F, <l> and C along eps = 2^-j, plus the per-step growth of <l>."""
import argparse
import sys

from chaitin_ensemble import Epsilon, ThermoConfig, avg_length, thermo_point
from chaitin_ensemble.thermo import write_thermo_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-pow2", type=int, default=60)
    ap.add_argument("--richardson", action="store_true")
    ap.add_argument("-o", "--output", type=argparse.FileType("w"), default=sys.stdout)
    ap.add_argument("--growth", action="store_true", help="print <l>(2^-(j+1)) / <l>(2^-j) instead")
    args = ap.parse_args()
    cfg = ThermoConfig(richardson=args.richardson)
    grid = range(2, args.max_pow2 + 1)
    if args.growth:
        prev = None
        for j in grid:
            cur = avg_length(Epsilon.dyadic(j), cfg=cfg)
            if prev is not None:
                print(f"{j} {cur / prev:.5f}", file=args.output)
            prev = cur
        return
    write_thermo_csv((thermo_point(Epsilon.dyadic(j), cfg) for j in grid), args.output)


if __name__ == "__main__":
    main()
