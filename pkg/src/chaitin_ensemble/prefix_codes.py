"""Prefix-free sets viewed as binary trees, one generation at a time.

At generation l every string of length l is exactly one of

* red: a code member,
* black: a proper prefix of some member (still "alive"),
* white: never born, because a shorter member is a prefix of it.

Writing P_l = n_red 2^-l and Q_l = w_white 2^-l, each red dot spawns two
white children, so Q_(l+1) = Q_l + P_l, and the Kraft sum up to l is
Q_(l+1).

Fibonacci-type codes: a string is a member when its trailing run of ones
reaches the threshold N(l) of its own generation (and no ancestor was a
member already).  FibonacciCode fixes N; GeneralizedFibCode uses
N(l) = int(1 + lg l), which makes P_l fall off like a power of l.  The
tree is tracked by a DP over the length r of the current trailing run.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Union

import mpmath
import numpy as np

from .codec import ENUMERATION_BOUND, length_counts
from .errors import DomainError, ResourceBoundError, ToleranceError

#: P_l, Q_l are exact Fractions up to this generation, floats beyond.
EXACT_LIMIT = 64


@dataclass(frozen=True)
class CountingCode:
    name = "counting"


@dataclass(frozen=True)
class FibonacciCode:
    N: int = 2

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise DomainError(f"FibonacciCode needs N >= 2, got {self.N!r}")

    @property
    def name(self) -> str:
        return f"fibonacci{self.N}"

    def threshold(self, l: int) -> int:
        return self.N


@dataclass(frozen=True)
class GeneralizedFibCode:
    """Run threshold int(1 + lg l), evaluated at the child's generation."""

    name = "genfib"

    def threshold(self, l: int) -> int:
        return l.bit_length() if l >= 1 else 1


CodeFamily = Union[CountingCode, FibonacciCode, GeneralizedFibCode]


def code_from_name(name: str) -> CodeFamily:
    """'counting', 'fibonacci<N>' (or 'fib<N>'), 'genfib'."""
    key = name.strip().lower()
    if key == "counting":
        return CountingCode()
    if key in ("genfib", "generalized", "generalized-fibonacci"):
        return GeneralizedFibCode()
    for prefix in ("fibonacci", "fib"):
        if key.startswith(prefix):
            tail = key[len(prefix):] or "2"
            try:
                return FibonacciCode(int(tail))
            except ValueError:
                break
    raise DomainError(f"unknown code family {name!r}")


@dataclass(frozen=True)
class GenerationStats:
    l: int
    n_red: int
    m_black: int
    w_white: int
    P_l: Union[Fraction, float]
    Q_l: Union[Fraction, float]

    @property
    def kraft_partial(self):
        """Sum of P over generations <= l, i.e. Q_(l+1)."""
        return self.Q_l + self.P_l


def _ratio(count: int, l: int):
    if l <= EXACT_LIMIT:
        return Fraction(count, 1 << l)
    return math.ldexp(count, -l) if count.bit_length() < 1000 else float(Fraction(count, 1 << l))


def _red_counts_fib(code, l_max: int) -> List[int]:
    """n_red for l = 1..l_max by DP over the trailing run of ones (exact ints)."""
    alive = {0: 1}  # generation 0: the empty string
    reds = []
    for l in range(1, l_max + 1):
        need = code.threshold(l)
        nxt: Dict[int, int] = {}
        red = 0
        for r, c in alive.items():
            nxt[0] = nxt.get(0, 0) + c  # append 0
            if r + 1 >= need:
                red += c
            else:
                nxt[r + 1] = nxt.get(r + 1, 0) + c
        reds.append(red)
        alive = nxt
    return reds


def red_counts(code: CodeFamily, l_max: int) -> List[int]:
    """Number of members of each length 1..l_max."""
    if l_max < 1:
        raise DomainError("l_max must be >= 1")
    if isinstance(code, CountingCode):
        if l_max > ENUMERATION_BOUND:
            raise ResourceBoundError(
                f"counting code stats are enumerated only up to l = {ENUMERATION_BOUND}"
            )
        counts = length_counts(l_max)
        return [counts.get(l, 0) for l in range(1, l_max + 1)]
    return _red_counts_fib(code, l_max)


def generation_stats(code: CodeFamily, l_max: int) -> List[GenerationStats]:
    reds = red_counts(code, l_max)
    out = []
    white = 0
    for l, red in enumerate(reds, start=1):
        black = (1 << l) - red - white
        out.append(GenerationStats(l, red, black, white, _ratio(red, l), _ratio(white, l)))
        white = 2 * (white + red)
    return out


def kraft_partial_sum(code: CodeFamily, l_max: int) -> Fraction:
    """Sum of 2^-l over members of length <= l_max, as an exact dyadic rational."""
    reds = red_counts(code, l_max)
    num = 0
    for red in reds:
        num = 2 * num + red
    return Fraction(num, 1 << l_max)


def member_probabilities(code: CodeFamily, l_max: int) -> np.ndarray:
    """P_l for l = 0..l_max as floats (index 0 is unused and zero).

    Float DP over the trailing-run state with the 2^-l normalization folded
    in; every step is a sum of nonnegative terms, so the relative error stays
    below about l_max * 2**-53.
    """
    if isinstance(code, CountingCode):
        return np.array([0.0] + [float(s.P_l) for s in generation_stats(code, l_max)])
    top = code.threshold(l_max) + 1
    alive = np.zeros(top)
    alive[0] = 1.0
    P = np.zeros(l_max + 1)
    for l in range(1, l_max + 1):
        need = code.threshold(l)
        half = alive * 0.5
        nxt = np.zeros(top)
        nxt[0] = half.sum()
        P[l] = half[need - 1:].sum()
        nxt[1:need] = half[: need - 1]
        alive = nxt
    return P


def survival_mass(code: CodeFamily, l_max: int) -> float:
    """Probability mass still alive (black) after generation l_max."""
    return max(0.0, 1.0 - float(member_probabilities(code, l_max).sum()))


@dataclass(frozen=True)
class DecayFit:
    model: str  # "exponential" or "power"
    parameter: float  # ratio P_(l+1)/P_l, or alpha in P_l ~ l^-alpha
    rss_exponential: float
    rss_power: float
    points: int


def _fit(x: np.ndarray, y: np.ndarray):
    coef, res, *_ = np.polyfit(x, y, 1, full=True)
    rss = float(res[0]) if len(res) else 0.0
    return coef[0], rss


def decay_estimate(code: CodeFamily, l_min: int, l_max: int) -> DecayFit:
    """Fit log P_l against l and against log l; report the better model.

    Generations with P_l = 0 (the generalized code has none at l = 2^j)
    are skipped.
    """
    if l_min < 8 or l_max <= l_min:
        raise DomainError("need l_max > l_min >= 8")
    P = member_probabilities(code, l_max)
    l = np.arange(l_min, l_max + 1)
    p = P[l_min:]
    keep = p > 0
    if keep.sum() < 3:
        raise DomainError("degenerate fit: fewer than 3 nonzero P_l in range")
    l, logp = l[keep].astype(float), np.log(p[keep])
    slope_e, rss_e = _fit(l, logp)
    slope_p, rss_p = _fit(np.log(l), logp)
    if rss_e <= rss_p:
        return DecayFit("exponential", math.exp(float(slope_e)), rss_e, rss_p, int(keep.sum()))
    return DecayFit("power", -float(slope_p), rss_e, rss_p, int(keep.sum()))


@dataclass(frozen=True)
class SingularityFit:
    exponent: float
    eps: tuple
    one_minus_z: tuple
    max_tail_error: float


def _synthetic_deficit(alpha: float, eps: float) -> tuple:
    """1 - Z for P_l = l^-alpha / zeta(alpha): direct sum + Hurwitz-zeta tail."""
    L = int(math.ceil(60.0 / eps))
    l = np.arange(1, L + 1, dtype=float)
    z = float(mpmath.zeta(alpha))
    head = float(np.sum(l ** -alpha * -np.expm1(-eps * l))) / z
    tail = float(mpmath.zeta(alpha, L + 1)) / z  # factor (1 - e^-eps l) in [1 - e^-60, 1]
    return head + tail, tail * math.exp(-60.0)


def _code_deficit(P: np.ndarray, alive: float, eps: float) -> tuple:
    l = np.arange(len(P), dtype=float)
    head = float(np.sum(P * -np.expm1(-eps * l)))
    L = len(P) - 1
    return head + alive, alive * math.exp(-eps * L)


def power_law_singularity_check(
    alpha: Optional[float],
    eps_grid: Sequence[float],
    code: Optional[CodeFamily] = None,
    rel_tol: float = 1e-6,
) -> SingularityFit:
    """Fitted exponent s in 1 - Z(eps) ~ eps^s.

    With ``code=None`` the members are synthetic, P_l = l^-alpha/zeta(alpha).
    Otherwise P_l comes from the code's DP, summed out to l = 40/min(eps);
    the mass still alive there is counted with weight 1, which is exact up to
    a factor e^(-40).
    """
    eps_grid = sorted(float(e) for e in eps_grid)
    if len(eps_grid) < 2:
        raise DomainError("need at least two eps values")
    if not all(0 < e <= 0.2 for e in eps_grid):
        raise DomainError("eps values must lie in (0, 0.2]")
    values, errors = [], []
    if code is None:
        if alpha is None or not alpha > 1:
            raise DomainError("alpha must be > 1")
        for e in eps_grid:
            v, err = _synthetic_deficit(alpha, e)
            values.append(v)
            errors.append(err)
    else:
        L = int(math.ceil(40.0 / eps_grid[0]))
        P = member_probabilities(code, L)
        alive = max(0.0, 1.0 - float(P.sum()))
        for e in eps_grid:
            v, err = _code_deficit(P, alive, e)
            values.append(v)
            errors.append(err)
    worst = max(err / v for v, err in zip(values, errors))
    if worst > rel_tol:
        raise ToleranceError(f"series truncation error {worst:.3g} above {rel_tol}", achieved=worst)
    slope, _ = _fit(np.log(eps_grid), np.log(values))
    return SingularityFit(float(slope), tuple(eps_grid), tuple(values), worst)


CSV_COLUMNS = ("l", "n_red", "m_black", "w_white", "P_l", "Q_l", "kraft_partial")


def _num(x) -> str:
    return repr(float(x))


def write_stats_csv(stats: Iterable[GenerationStats], out: Optional[TextIO] = None) -> str:
    buf = out if out is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in stats:
        w.writerow([s.l, s.n_red, s.m_black, s.w_white, _num(s.P_l), _num(s.Q_l), _num(s.kraft_partial)])
    return buf.getvalue() if out is None else ""
