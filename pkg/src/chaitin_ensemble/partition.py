"""Partition function of the counting machine near beta_c = ln 2.

Grouping programs by iteration count k, with beta = ln 2 + eps::

    Z_0 = 3 e^(-2 beta) + e^(-3 beta),   Z_1 = 4 e^(-6 beta)
    Z_k = 8 e^(-6 beta) V_(k-1)(3)                       (k >= 2)

    V_0(n) = 1/2
    V_d(n) = 2^-n * sum_{m = 2^(n-1)}^{2^n - 1} e^(-eps m) V_(d-1)(m)

V_1(n) is the closed-form geometric sum A(n, eps).  At eps = 0 every V_d(n)
equals 2^-(d+1), which gives Z_k = 2^-(k+3).

For d >= 2 the range of m splits in three:

* flat: eps * (largest chain value below m) <= 2**-60, so V_(d-1)(m) is
  its eps = 0 value to that relative accuracy; summed as one geometric block;
* transition: enumerated term by term (a few dozen values at most);
* dead: V_(d-1)(m) <= 2^-d exp(-eps * smallest innermost value), bounded by
  a geometric block and dropped once the bound is below 2**-60 of the sum.

All magnitudes are LogScalars, so nothing underflows however deep the
suppression.  The bounds dropped along the way add up in
``PartitionResult.truncation_bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .errors import DomainError, ResourceBoundError, ToleranceError
from .numerics import (
    LAMBDA,
    LOG2E,
    PHI,
    Epsilon,
    LogScalar,
    exp2,
    int_to_float,
    log2_one_minus_exp_neg,
    slog2_of_inverse,
)

EpsLike = Union[Epsilon, float, int]

#: Smallest literal eps accepted by the exact engine; use Epsilon.dyadic below.
MIN_LITERAL_EPS = 1e-300
#: Best relative tolerance the engine can honour in double precision.
MIN_TOL = 1e-15

EXACT, A5_APPROX, HYBRID, ASYMPTOTIC = "exact", "a5", "hybrid", "asymptotic"


@dataclass(frozen=True)
class EngineConfig:
    tol: float = 1e-12
    #: log2 of the relative error accepted when a subtree is treated as flat
    flat_log2: float = -60.0
    #: log2 of the dead-region bound, relative to the running sum, for cutting it
    dead_log2: float = -60.0
    #: safety cap on explicitly enumerated terms in one range
    transition_limit: int = 2**20
    #: largest log2(1/eps) the exact engine accepts
    max_log2_inv_eps: int = 1_000_000
    k_limit: int = 200


DEFAULT_CONFIG = EngineConfig()


@dataclass(frozen=True)
class PartitionResult:
    eps: Epsilon
    per_k: Tuple[Tuple[int, LogScalar], ...]
    total: float
    log2_total: float
    one_minus_total: float
    truncation_bound: float
    k_max_used: int
    method: str

    @property
    def beta(self) -> float:
        return self.eps.beta

    @property
    def ln_total(self) -> float:
        return self.log2_total / LOG2E


def geometric_block(a: int, b: int, eps: EpsLike, log2_prefactor: float = 0.0) -> LogScalar:
    """2**log2_prefactor * sum_{n=a}^{b} exp(-eps n), via the closed form."""
    eps = Epsilon.of(eps)
    if a > b:
        raise DomainError(f"empty range [{a}, {b}]")
    if a < 0:
        raise DomainError("a must be nonnegative")
    count = b - a + 1
    if eps.is_zero:
        return LogScalar(log2_prefactor + math.log2(count))
    head = eps.times(a) * LOG2E if a else 0.0
    if head == math.inf:
        return LogScalar.zero()
    log2_sum = (
        log2_one_minus_exp_neg(eps.log2_times(count))
        - log2_one_minus_exp_neg(eps.log2)
        - head
    )
    return LogScalar(log2_prefactor + log2_sum)


def a_factor(x: float, eps: EpsLike) -> float:
    """Integral form (e^(-M eps/2) - e^(-M eps)) / (2 M eps) with M = 2**x.

    Tends to 1/4 for M eps -> 0 and to 0 for M eps >> 1.
    """
    eps = Epsilon.of(eps)
    if eps.is_zero:
        return 0.25
    log2_y = x + eps.log2
    if log2_y < -1000.0:
        return 0.25
    y = exp2(log2_y)
    if y > 3000.0:
        return 0.0
    return math.exp(-y / 2) * -math.expm1(-y / 2) / (2 * y)


def _log2_chain_top(j: int, m: int) -> float:
    """log2 of the largest innermost value j levels below m (t_1 = 2^m - 1)."""
    t = int_to_float(m)
    for _ in range(j - 1):
        t = exp2(t)
    return t


def _log2_chain_bottom(j: int, m: int) -> float:
    """log2 of the smallest innermost value j levels below m (s_1 = 2^(m-1))."""
    t = int_to_float(m - 1)
    for _ in range(j - 1):
        t = exp2(t) - 1.0
    return t


class _Evaluator:
    def __init__(self, eps: Epsilon, config: EngineConfig, inner: str = EXACT, floor: bool = True):
        self.eps = eps
        self.config = config
        self.inner = inner
        self.cache: Dict[Tuple[int, int], Tuple[LogScalar, LogScalar]] = {}
        # set once a flat block stands in for a subtree (method = hybrid)
        self.approximated = False
        # Every V term enters Z under weights <= 1, and Z >= Z_0; pieces whose
        # bound is this far below Z_0 are dropped even before a sum exists.
        # Without the floor, Z_k comes out to relative accuracy on its own.
        self.floor_log2 = self.zk(0)[0].log2 + config.dead_log2 if floor else -math.inf

    def flat_ok(self, j: int, m: int) -> bool:
        # relative deficit of V_j(m) from 2^-(j+1) is at most eps * (sum of chain) <= eps * 2 t_j
        return self.eps.log2 + 1.0 + _log2_chain_top(j, m) <= self.config.flat_log2

    def dead_bound(self, j: int, lo: int, hi: int) -> LogScalar:
        """Upper bound on sum_{m=lo}^{hi} e^(-eps m) V_j(m)."""
        s = _log2_chain_bottom(j, lo)
        suppress = exp2(self.eps.log2 + s) * LOG2E
        if suppress == math.inf:
            return LogScalar.zero()
        return geometric_block(lo, hi, self.eps, -(j + 1) - suppress)

    def V(self, d: int, n: int) -> Tuple[LogScalar, LogScalar]:
        """(value, absolute error bound) of V_d(n)."""
        key = (d, n)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = self._V(d, n)
        return hit

    def _V(self, d: int, n: int) -> Tuple[LogScalar, LogScalar]:
        eps = self.eps
        if eps.is_zero:
            return LogScalar(-(d + 1.0)), LogScalar.zero()
        a, b = 1 << (n - 1), (1 << n) - 1
        if d == 1:
            if self.inner == A5_APPROX:
                return LogScalar.from_float(a_factor(n, eps)), LogScalar.zero()
            return geometric_block(a, b, eps, -n - 1), LogScalar.zero()
        j = d - 1
        total, err = LogScalar.zero(), LogScalar.zero()
        # flat region [a, m_lo]
        if self.flat_ok(j, a):
            lo, hi = a, b
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if self.flat_ok(j, mid):
                    lo = mid
                else:
                    hi = mid - 1
            m_lo = lo
            flat = geometric_block(a, m_lo, eps, -(j + 1))
            total = flat
            if not eps.is_zero:
                self.approximated = True
                err = flat.scale2(self.config.flat_log2)
        else:
            m_lo = a - 1
        # transition terms, then the dead tail
        m = m_lo + 1
        enumerated = 0
        while m <= b:
            bound = self.dead_bound(j, m, b)
            if (
                bound.log2 - n <= self.floor_log2
                or bound.log2 <= total.log2 + self.config.dead_log2
            ):
                err = err + bound
                break
            v, e = self.V(j, m)
            weight = LogScalar(-eps.times(m) * LOG2E)
            total = total + weight * v
            err = err + weight * e
            m += 1
            enumerated += 1
            if enumerated > self.config.transition_limit:
                raise ResourceBoundError(
                    f"more than {self.config.transition_limit} explicit terms at depth {d}, n={n}"
                )
        return total.scale2(-n), err.scale2(-n)

    def zk(self, k: int) -> Tuple[LogScalar, LogScalar]:
        beta_log2e = (1.0 + self.eps.float_value * LOG2E)  # beta * log2(e)
        if k == 0:
            return (
                LogScalar(math.log2(3) - 2 * beta_log2e) + LogScalar(-3 * beta_log2e),
                LogScalar.zero(),
            )
        if k == 1:
            return LogScalar(2 - 6 * beta_log2e), LogScalar.zero()
        v, e = self.V(k - 1, 3)
        return v.scale2(3 - 6 * beta_log2e), e.scale2(3 - 6 * beta_log2e)


def _check_eps(eps: Epsilon, config: EngineConfig) -> None:
    if eps.pow2 is None and 0 < eps.value < MIN_LITERAL_EPS:
        raise DomainError(
            f"literal eps below {MIN_LITERAL_EPS}; pass Epsilon.dyadic(e) instead"
        )
    if eps.pow2 is not None and eps.pow2 > config.max_log2_inv_eps:
        raise ResourceBoundError(
            f"eps = 2**-{eps.pow2} is beyond the exact engine (max exponent "
            f"{config.max_log2_inv_eps}); use the asymptotic method"
        )


def _check_tol(tol: float) -> None:
    if not 0 < tol <= 1e-3:
        raise DomainError(f"tol must lie in (0, 1e-3], got {tol!r}")
    if tol < MIN_TOL:
        raise ToleranceError(f"tol {tol!r} is below the achievable {MIN_TOL}", achieved=MIN_TOL)


def zk_exact(k: int, eps: EpsLike, tol: float = 1e-12, config: EngineConfig = DEFAULT_CONFIG) -> LogScalar:
    """Contribution of the programs with k iterations."""
    if k < 0:
        raise DomainError("k must be >= 0")
    eps = Epsilon.of(eps)
    _check_tol(tol)
    _check_eps(eps, config)
    return _Evaluator(eps, config, floor=False).zk(k)[0]


def min_program_length_log2(k: int) -> float:
    """log2 of the shortest program length with k iterations.

    The shortest chain is n_2 = 4, n_(i+1) = 2^(n_i - 1); from k = 6 on the
    last term dominates the length far below double precision.
    """
    if k == 0:
        return 1.0
    if k == 1:
        return math.log2(6)
    length, n = 10, 4
    for _ in range(k - 2):
        if n > 1 << 20:
            break
        n = 1 << (n - 1)
        length += n
    else:
        return math.log2(length)
    # deep k: log2 of the final chain value, iterating in the log domain
    log2_n = 2.0
    for _ in range(k - 2):
        log2_n = exp2(log2_n) - 1.0
    return log2_n


def tail_bound_log2(k: int, eps: Epsilon) -> float:
    """log2 of an upper bound on sum_{k' > k} Z_k'.

    Z_k' <= 2^-(k'+3) exp(-eps * l_min(k')), and l_min grows with k'.
    """
    base = -(k + 3.0)
    if eps.is_zero:
        return base
    suppress = exp2(eps.log2 + min_program_length_log2(k + 1)) * LOG2E
    return base - suppress


def partition_exact(
    eps: EpsLike,
    tol: float = 1e-12,
    config: EngineConfig = DEFAULT_CONFIG,
    inner: str = EXACT,
) -> PartitionResult:
    """Sum Z_k over k until the tail bound (``tail_bound_log2``) is below
    tol relative to the sum.

    The reported ``truncation_bound`` is that tail bound plus every bound
    dropped while pruning; at eps = 0 the tail is exactly 2^-(k+3).
    ``inner="a5"`` replaces the innermost geometric sums by their integral
    form (``a_factor``).
    """
    eps = Epsilon.of(eps)
    _check_tol(tol)
    _check_eps(eps, config)
    ev = _Evaluator(eps, config, inner)
    per_k: List[Tuple[int, LogScalar]] = []
    total, err = LogScalar.zero(), LogScalar.zero()
    log2_tol = math.log2(tol)
    k = 0
    while True:
        z, e = ev.zk(k)
        per_k.append((k, z))
        total, err = total + z, err + e
        if tail_bound_log2(k, eps) <= total.log2 + log2_tol:
            break
        k += 1
        if k > config.k_limit:
            raise ToleranceError(
                f"tail above tol after {config.k_limit} iterations", achieved=2.0 ** -(k + 2)
            )
    tail = 2.0 ** tail_bound_log2(k, eps)
    if eps.is_zero:
        # known exactly at criticality
        total = total + LogScalar(-(k + 3.0))
    method = inner if inner == A5_APPROX else (HYBRID if ev.approximated else EXACT)
    return PartitionResult(
        eps=eps,
        per_k=tuple(per_k),
        total=float(total),
        log2_total=total.log2,
        one_minus_total=_one_minus(per_k, eps, k),
        truncation_bound=float(err) + tail,
        k_max_used=k,
        method=method,
    )


def _one_minus(per_k, eps: Epsilon, k_max: int) -> float:
    """1 - Z as sum_k (Z_k(0) - Z_k(eps)) plus the tail mass, each term nonnegative."""
    if eps.is_zero:
        return 0.0
    deficit = 0.0
    for k, z in per_k:
        crit = 0.875 if k == 0 else 2.0 ** -(k + 3)
        deficit += crit - float(z)
    return deficit + 2.0 ** -(k_max + 3)


def rare_case_value(K: int) -> float:
    """Z when 1/eps = Lambda_K: 1 - 2^-(K+3)."""
    if K < 2:
        raise DomainError("K must be >= 2")
    return 1.0 - 2.0 ** -(K + 3)


def asymptotic_deficit(eps: EpsLike) -> float:
    """lambda * 2^(-slog2(1/eps)), the leading behaviour of 1 - Z."""
    eps = Epsilon.of(eps)
    if eps.is_zero:
        return 0.0
    return LAMBDA * 2.0 ** -slog2_of_inverse(eps)


def partition_asymptotic(eps: EpsLike) -> float:
    return 1.0 - asymptotic_deficit(eps)


def k_of_eps(eps: EpsLike) -> float:
    """Effective number of contributing iterations, slog2(1/eps) - phi."""
    return slog2_of_inverse(Epsilon.of(eps)) - PHI
