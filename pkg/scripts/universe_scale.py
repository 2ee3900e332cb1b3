#!/usr/bin/env python3
"""How far from 1 is Z at cosmologically small eps?

2^-200 and 2^-65536 never exist as floats here; both go through the
dyadic representation.
"""
from chaitin_ensemble import Epsilon, k_of_eps, partition_asymptotic, partition_exact, slog2_of_inverse


def report(j):
    eps = Epsilon.dyadic(j)
    exact = partition_exact(eps)
    asym = 1 - partition_asymptotic(eps)
    print(f"eps = 2^-{j}")
    print(f"  slog2(1/eps)        {slog2_of_inverse(eps):.4f}")
    print(f"  effective K         {k_of_eps(eps):.3f}")
    print(f"  1 - Z (asymptotic)  {asym:.5f}  ({asym:.2%})")
    print(f"  1 - Z (exact)       {exact.one_minus_total:.5f}  (k_max {exact.k_max_used}, {exact.method})")


if __name__ == "__main__":
    for j in (127, 200, 65536):
        report(j)
