import io
import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaitin_ensemble.errors import DomainError, ResourceBoundError
from chaitin_ensemble.prefix_codes import (
    CountingCode,
    FibonacciCode,
    GeneralizedFibCode,
    code_from_name,
    decay_estimate,
    generation_stats,
    kraft_partial_sum,
    member_probabilities,
    power_law_singularity_check,
    red_counts,
    survival_mass,
    write_stats_csv,
)

CODES = [CountingCode(), FibonacciCode(2), FibonacciCode(3), GeneralizedFibCode()]


def brute_members(code, l_max):
    """Members by walking every string: red iff trailing ones reach the threshold
    and no proper prefix was red."""
    members = set()
    for L in range(1, l_max + 1):
        for t in itertools.product("01", repeat=L):
            s = "".join(t)
            if any(s[:i] in members for i in range(1, L)):
                continue
            run = len(s) - len(s.rstrip("1"))
            if run >= code.threshold(L):
                members.add(s)
    return members


@pytest.mark.parametrize("code", CODES[1:], ids=lambda c: c.name)
def test_dp_matches_exhaustive_tree(code):
    members = brute_members(code, 14)
    counts = [sum(1 for m in members if len(m) == l) for l in range(1, 15)]
    assert red_counts(code, 14) == counts


def test_fibonacci2_counts():
    assert red_counts(FibonacciCode(2), 8) == [0, 1, 1, 2, 3, 5, 8, 13]


def test_kraft_counting_13():
    assert kraft_partial_sum(CountingCode(), 13) == Fraction(31, 32)
    assert kraft_partial_sum(CountingCode(), 3) == Fraction(7, 8)


@pytest.mark.parametrize("code", CODES, ids=lambda c: c.name)
def test_tree_identities(code):
    stats = generation_stats(code, 16)
    for s in stats:
        assert s.n_red + s.m_black + s.w_white == 2**s.l
        assert s.m_black >= 0
    for a, b in zip(stats, stats[1:]):
        assert b.Q_l - a.Q_l == a.P_l
        assert isinstance(a.P_l, Fraction)
    assert stats[-1].kraft_partial == kraft_partial_sum(code, 16)


@given(st.integers(2, 6), st.integers(1, 40))
def test_tree_identities_fib_property(N, l_max):
    stats = generation_stats(FibonacciCode(N), l_max)
    q = Fraction(0)
    for s in stats:
        assert s.Q_l == q
        assert s.n_red + s.m_black + s.w_white == 2**s.l
        q += s.P_l
    assert q == kraft_partial_sum(FibonacciCode(N), l_max) <= 1


def test_counting_bound():
    with pytest.raises(ResourceBoundError):
        red_counts(CountingCode(), 31)


def test_fib2_kraft_near_one():
    assert float(kraft_partial_sum(FibonacciCode(2), 24)) == pytest.approx(0.99276, abs=1e-5)


def test_member_probabilities_agree_with_exact():
    for code in CODES[1:]:
        P = member_probabilities(code, 60)
        exact = [float(s.P_l) for s in generation_stats(code, 60)]
        assert np.allclose(P[1:], exact, rtol=1e-13, atol=0)


def test_genfib_zero_at_powers_of_two():
    P = member_probabilities(GeneralizedFibCode(), 300)
    for j in range(2, 9):
        assert P[2**j] == 0.0
    alive = [survival_mass(GeneralizedFibCode(), l) for l in (256, 1024, 4096)]
    assert alive[0] > alive[1] > alive[2] > 0.0
    assert alive[2] < 0.05


@pytest.mark.parametrize("N, ratio", [(2, (1 + 5**0.5) / 4), (3, 0.919643377607080)])
def test_fibonacci_decays_exponentially(N, ratio):
    fit = decay_estimate(FibonacciCode(N), 16, 200)
    assert fit.model == "exponential"
    assert fit.parameter == pytest.approx(ratio, rel=1e-4)


def test_genfib_decays_like_power():
    fit = decay_estimate(GeneralizedFibCode(), 64, 4096)
    assert fit.model == "power"
    assert fit.parameter > 1
    assert fit.parameter == pytest.approx(1.312837, abs=1e-5)


def test_decay_estimate_validation():
    with pytest.raises(DomainError):
        decay_estimate(FibonacciCode(2), 4, 100)


def _oracle_deficit(alpha, eps):
    # 30-digit direct sum to 80/eps, Hurwitz zeta beyond (the factor there is 1 - e^-80)
    with mpmath.workdps(30):
        e = mpmath.mpf(eps)
        L = int(80 / eps)
        head = mpmath.fsum(mpmath.mpf(l) ** -alpha * -mpmath.expm1(-e * l) for l in range(1, L + 1))
        return (head + mpmath.zeta(alpha, L + 1)) / mpmath.zeta(alpha)


@pytest.mark.parametrize("alpha, frozen", [(2.0, 0.7516265), (3.0, 0.9400293)])
def test_synthetic_singularity(alpha, frozen):
    grid = [0.1, 0.05, 0.025]
    fit = power_law_singularity_check(alpha, grid)
    for e, v in zip(fit.eps, fit.one_minus_z):
        assert v == pytest.approx(float(_oracle_deficit(alpha, e)), rel=1e-9)
    assert fit.exponent == pytest.approx(frozen, abs=1e-6)


def test_synthetic_exponent_below_two():
    # for 1 < alpha < 2 the deficit scales as eps^(alpha - 1)
    fit = power_law_singularity_check(1.5, [2.0**-j for j in range(6, 13)])
    assert fit.exponent == pytest.approx(0.5, abs=0.02)


def test_genfib_singularity_matches_alpha():
    alpha = decay_estimate(GeneralizedFibCode(), 64, 4096).parameter
    fit = power_law_singularity_check(None, [2.0**-j for j in range(6, 13)], code=GeneralizedFibCode())
    assert abs(fit.exponent - (alpha - 1)) <= 0.25 * (alpha - 1)


def test_singularity_validation():
    with pytest.raises(DomainError):
        power_law_singularity_check(0.9, [0.1, 0.05])
    with pytest.raises(DomainError):
        power_law_singularity_check(2.0, [0.1])
    with pytest.raises(DomainError):
        power_law_singularity_check(2.0, [0.5, 0.1])


def test_code_from_name():
    assert code_from_name("counting") == CountingCode()
    assert code_from_name("fibonacci3") == FibonacciCode(3)
    assert code_from_name("fib") == FibonacciCode(2)
    assert code_from_name("genfib") == GeneralizedFibCode()
    for bad in ("fib1", "huffman"):
        with pytest.raises(DomainError):
            code_from_name(bad)


def test_stats_csv():
    text = write_stats_csv(generation_stats(FibonacciCode(2), 3))
    lines = text.splitlines()
    assert lines[0] == "l,n_red,m_black,w_white,P_l,Q_l,kraft_partial"
    assert lines[2] == "2,1,3,0,0.25,0.0,0.25"
    buf = io.StringIO()
    write_stats_csv(generation_stats(FibonacciCode(2), 3), buf)
    assert buf.getvalue() == text
