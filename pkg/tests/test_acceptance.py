"""Acceptance criteria, one test each.

Every test prints ``ACCEPTANCE <n>: PASS|FAIL <detail>`` before asserting,
so ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``)
gives a one-line summary per criterion.
"""

import csv
import io
import itertools
import math
import random
from fractions import Fraction

import pytest

from chaitin_ensemble.cli import main
from chaitin_ensemble.codec import InsufficientBits, decode, encode, enumerate_programs
from chaitin_ensemble.machine import Halted, run
from chaitin_ensemble.machines import counting_machine_spec
from chaitin_ensemble.numerics import Epsilon, slog2_of_inverse
from chaitin_ensemble.partition import partition_asymptotic, partition_exact, zk_exact
from chaitin_ensemble.prefix_codes import (
    CountingCode,
    FibonacciCode,
    GeneralizedFibCode,
    decay_estimate,
    generation_stats,
    kraft_partial_sum,
    power_law_singularity_check,
)
from chaitin_ensemble.thermo import avg_length, check_toy_derivative, free_energy
from chaitin_ensemble.verify import brute_force_partition


def criterion_1():
    for n in range(10**5 + 1):
        p = encode(n)
        d = decode(p.bits)
        if d.N != n or d.bits_consumed != p.length:
            return False, f"round trip broke at N={n}"
    rng = random.Random(1)
    for _ in range(1000):
        n = rng.randrange(2**512 + 1)
        if decode(encode(n).bits).N != n:
            return False, f"round trip broke at a 512-bit N"
    d = decode("11100110100")
    if (d.N, d.bits_consumed) != (13, 10):
        return False, f"11100110100 -> {d}"
    listed = [str(b) for b, _ in enumerate_programs(6)]
    want = ["00", "01", "10", "110", "111000", "111010", "111100", "111110"]
    if listed != want:
        return False, f"enumerate(6) = {listed}"
    return True, "N <= 1e5 and 1000 random 512-bit N round-trip; 11100110100 -> N=13 in 10 bits; enumerate(6) exact"


def criterion_2():
    spec = counting_machine_spec()
    checked = 0
    for L in range(1, 15):
        for t in itertools.product("01", repeat=L):
            s = "".join(t)
            try:
                d = decode(s)
            except InsufficientBits:
                continue
            out = run(spec, s)
            if not (isinstance(out, Halted) and len(out.output) == d.N and out.program_bits_read == d.bits_consumed):
                return False, f"mismatch on {s}: {out}"
            checked += 1
    return True, f"{checked} decodable strings of length <= 14 agree"


def criterion_3():
    r = partition_exact(0.0, 1e-6)
    per_k = [float(zk_exact(k, 0.0)) for k in range(7)]
    want = [7 / 8, 1 / 16] + [2.0 ** -(k + 3) for k in range(2, 7)]
    worst = max(abs(a - b) for a, b in zip(per_k, want))
    ok = abs(r.total - 1) <= 1e-6 and worst <= 1e-9
    return ok, f"Z(0) = {r.total!r}, max per-k error {worst:.2g}"


def criterion_4():
    d3 = partition_exact(1 / 127).one_minus_total
    d4 = partition_exact(Epsilon.dyadic(127)).one_minus_total
    rel3 = abs(d3 / 2**-6 - 1)
    rel4 = abs(d4 / 2**-7 - 1)
    ok = rel3 <= 0.20 and rel4 <= 0.02
    return ok, (
        f"1/eps=127: 1-Z = {d3:.6g} ({rel3:.1%} from 2^-6, limit 20%); "
        f"eps=2^-127: 1-Z = {d4:.6g} ({rel4:.2%} from 2^-7, limit 2%)"
    )


def criterion_5():
    d200 = 1 - partition_asymptotic(Epsilon.dyadic(200))
    s200 = slog2_of_inverse(Epsilon.dyadic(200))
    d65536 = 1 - partition_asymptotic(Epsilon.dyadic(65536))
    ok = abs(d200 - 0.0076) <= 5e-4 and abs(s200 - 4.6) <= 0.05 and abs(d65536 - 0.0058) <= 3e-4
    return ok, f"2^-200: 1-Z = {d200:.5f}, slog2 = {s200:.3f}; 2^-65536: 1-Z = {d65536:.5f}"


def criterion_6():
    worst = 0.0
    for eps in (1.0, 0.5, 0.1):
        want = brute_force_partition(eps)
        worst = max(worst, float(abs(partition_exact(eps).total - want) / want))
    return worst <= 1e-10, f"max relative error {worst:.2g}"


def criterion_7():
    for code in (CountingCode(), FibonacciCode(2), FibonacciCode(3), GeneralizedFibCode()):
        stats = generation_stats(code, 17)
        for a, b in zip(stats, stats[1:]):
            if a.n_red + a.m_black + a.w_white != 2**a.l or b.Q_l - a.Q_l != a.P_l:
                return False, f"identity broken for {code} at l={a.l}"
    k13 = kraft_partial_sum(CountingCode(), 13)
    return k13 == Fraction(31, 32), f"tree identities exact for l <= 16 in 4 codes; Kraft sum at 13 = {k13}"


def criterion_8():
    fit = decay_estimate(GeneralizedFibCode(), 64, 4096)
    sing = power_law_singularity_check(None, [2.0**-j for j in range(6, 13)], code=GeneralizedFibCode())
    alpha = fit.parameter
    rel = abs(sing.exponent - (alpha - 1)) / (alpha - 1)
    ok = fit.model == "power" and alpha > 1 and rel <= 0.25
    return ok, f"alpha = {alpha:.4f} ({fit.model}); singularity exponent {sing.exponent:.4f} vs alpha-1 ({rel:.1%})"


def criterion_9():
    l20 = avg_length(20 - math.log(2))
    grid = [10.0**-j for j in range(1, 7)]
    ls = [avg_length(e) for e in grid]
    fs = [free_energy(e) for e in grid]
    toy = max(check_toy_derivative(b) for b in (0.7, 1.0, 2.0, 20.0))
    ok = (
        abs(l20 - 2) <= 1e-3
        and all(b > a for a, b in zip(ls, ls[1:]))
        and all(math.isfinite(f) for f in fs)
        and all(b < a for a, b in zip(fs, fs[1:]))
        and fs[-1] < 0.02
        and toy <= 1e-8
    )
    return ok, (
        f"<l>(beta=20) = {l20:.7f}; <l> over eps=1e-1..1e-6: {', '.join(f'{x:.4g}' for x in ls)}; "
        f"F(1e-6) = {fs[-1]:.4g}; toy derivative error {toy:.2g}"
    )


def criterion_10():
    out, err = io.StringIO(), io.StringIO()
    status = main(["partition", "--eps-pow2-range", "1:120", "--format", "csv"], out=out, err=err)
    if status != 0:
        return False, f"cli exit {status}: {err.getvalue().strip()}"
    rows = list(csv.DictReader(io.StringIO(out.getvalue())))
    z = [float(r["z_exact"]) for r in rows]
    deficit = float(rows[-1]["one_minus_z_exact"])
    monotone = all(b > a for a, b in zip(z, z[1:]))
    ok = monotone and rows[-1]["eps_pow2"] == "120" and deficit > 0.006
    return ok, f"{len(rows)} rows, Z monotone in beta: {monotone}; 1-Z at 2^-120 = {deficit:.5f}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _report(n, ok, detail):
    return f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} {detail}"


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_acceptance(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + _report(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for i, check in enumerate(CRITERIA, 1):
        print(_report(i, *check()), flush=True)
