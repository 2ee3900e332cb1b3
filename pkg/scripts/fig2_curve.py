#!/usr/bin/env python3
"""Z against beta near criticality, exact and asymptotic, as CSV.

    python scripts/fig2_curve.py --max-pow2 200 -o fig2.csv
"""
import argparse
import csv
import sys

from chaitin_ensemble import Epsilon, partition_asymptotic, partition_exact


def rows(literal_grid, max_pow2):
    for eps in literal_grid:
        r = partition_exact(eps)
        yield {"eps": repr(eps), "beta": repr(r.beta), "z_exact": repr(r.total),
               "z_asymptotic": repr(partition_asymptotic(eps)) if eps < 0.5 else ""}
    for j in range(2, max_pow2 + 1):
        eps = Epsilon.dyadic(j)
        r = partition_exact(eps)
        yield {"eps": f"2**-{j}", "beta": repr(r.beta), "z_exact": repr(r.total),
               "z_asymptotic": repr(partition_asymptotic(eps))}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-pow2", type=int, default=200)
    ap.add_argument("-o", "--output", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args()
    # the high-temperature side, where Z falls off quickly
    literal = [4.0, 3.0, 2.0, 1.5, 1.0, 0.75, 0.5]
    w = csv.DictWriter(args.output, ["eps", "beta", "z_exact", "z_asymptotic"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows(literal, args.max_pow2))


if __name__ == "__main__":
    main()
