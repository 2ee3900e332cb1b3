"""Super-logarithm, iterated logarithms, the distance from criticality and
log-domain scalars.

The distance ``eps = beta - ln 2`` comes in two forms: a plain float, or an
exact power of two ``2**-e`` whose exponent may be an arbitrarily large
integer.  The dyadic form never materializes ``2**e``; everything downstream
works with ``log2(eps) = -e``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Union

from .errors import DomainError

LN2 = math.log(2.0)
LOG2E = 1.0 / LN2

#: Offset between slog2(Lambda_k) and k for k >= 3 (printed to two digits).
PHI = 0.57
#: Prefactor of the asymptotic singularity, 2**(PHI - 3) ~ 0.186.
LAMBDA = 2.0 ** (PHI - 3.0)

Real = Union[int, float]


def log2_real(x: Real) -> float:
    """log2 of a positive float or of an arbitrarily large int."""
    return math.log2(x)


@dataclass(frozen=True)
class Epsilon:
    """Distance from the critical point, ``eps = beta - ln 2``.

    Exactly one of ``value`` (literal float, ``>= 0``) and ``pow2`` (meaning
    ``eps = 2**-pow2``) is set.  ``Epsilon.literal(0.0)`` is the critical
    point itself.
    """

    value: Optional[float] = None
    pow2: Optional[int] = None

    def __post_init__(self):
        if (self.value is None) == (self.pow2 is None):
            raise DomainError("Epsilon needs exactly one of value or pow2")
        if self.pow2 is not None:
            if not isinstance(self.pow2, int) or self.pow2 < 1:
                raise DomainError(f"pow2 exponent must be an integer >= 1, got {self.pow2!r}")
        elif not (self.value >= 0.0 and math.isfinite(self.value)):
            raise DomainError(f"eps must be finite and >= 0, got {self.value!r}")

    @classmethod
    def literal(cls, value: float) -> "Epsilon":
        return cls(value=float(value))

    @classmethod
    def dyadic(cls, e: int) -> "Epsilon":
        return cls(pow2=int(e))

    @classmethod
    def of(cls, eps: Union["Epsilon", float, int]) -> "Epsilon":
        return eps if isinstance(eps, Epsilon) else cls.literal(eps)

    @property
    def is_dyadic(self) -> bool:
        return self.pow2 is not None

    @property
    def is_zero(self) -> bool:
        return self.pow2 is None and self.value == 0.0

    @property
    def log2(self) -> float:
        """log2(eps); ``-inf`` at the critical point."""
        if self.pow2 is not None:
            return -float(self.pow2)
        return math.log2(self.value) if self.value > 0 else -math.inf

    @property
    def float_value(self) -> float:
        """eps as a float; underflows to 0.0 for very deep dyadic values."""
        if self.pow2 is not None:
            return math.ldexp(1.0, -self.pow2) if self.pow2 < 1100 else 0.0
        return self.value

    @property
    def beta(self) -> float:
        return LN2 + self.float_value

    def to_dyadic(self) -> "Epsilon":
        """Dyadic form, if eps is an exact power of two."""
        if self.pow2 is not None:
            return self
        m, ex = math.frexp(self.value)
        if m != 0.5 or ex > 0:
            raise DomainError(f"{self.value!r} is not 2**-e with e >= 1")
        return Epsilon.dyadic(1 - ex)

    def to_literal(self) -> "Epsilon":
        if self.pow2 is None:
            return self
        v = self.float_value
        if v == 0.0 or v < 2.0 ** -1022:
            raise DomainError(f"2**-{self.pow2} is not representable as a normal float")
        return Epsilon.literal(v)

    def log2_times(self, m: Real) -> float:
        """log2(eps * m) for m > 0 (m may be a huge int)."""
        return self.log2 + log2_real(m)

    def times(self, m: Real) -> float:
        """eps * m as a float (``inf`` on overflow, ``0.0`` on underflow)."""
        if m == 0 or self.is_zero:
            return 0.0
        return exp2(self.log2_times(m)) if (self.pow2 is not None or m > 2**1000) else self.value * m

    def __str__(self) -> str:
        return f"2**-{self.pow2}" if self.pow2 is not None else repr(self.value)


def exp2(x: float) -> float:
    """2**x without OverflowError."""
    if x >= 1024.0:
        return math.inf
    if x < -1080.0:
        return 0.0
    return 2.0 ** x


def int_to_float(m: int) -> float:
    """float(m), saturating to inf instead of raising."""
    return float(m) if m.bit_length() <= 1023 else math.inf


def log2_one_minus_exp_neg(log2_x: float) -> float:
    """log2(1 - exp(-x)) where x = 2**log2_x >= 0, stable for tiny and huge x."""
    if log2_x == -math.inf:
        return -math.inf
    if log2_x < -60.0:
        # 1 - e^-x = x (1 - x/2 + ...), relative error below 2**-61
        return log2_x
    if log2_x > 12.0:
        return 0.0
    x = 2.0 ** log2_x
    return math.log2(-math.expm1(-x))


@dataclass(frozen=True, order=True)
class LogScalar:
    """A nonnegative magnitude stored as ``log2(x)``; zero is ``-inf``.

    Addition uses the max-plus-log1p form, so sums of terms far below the
    float range stay exact in relative terms.  No subtraction: every series
    handled here has nonnegative terms.
    """

    log2: float = -math.inf

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(-math.inf)

    @classmethod
    def one(cls) -> "LogScalar":
        return cls(0.0)

    @classmethod
    def from_float(cls, x: float) -> "LogScalar":
        if x < 0:
            raise DomainError("LogScalar holds nonnegative values only")
        return cls(math.log2(x)) if x > 0 else cls.zero()

    @classmethod
    def pow2(cls, k: float) -> "LogScalar":
        return cls(float(k))

    @property
    def is_zero(self) -> bool:
        return self.log2 == -math.inf

    def __add__(self, other: "LogScalar") -> "LogScalar":
        a, b = self.log2, other.log2
        if a < b:
            a, b = b, a
        if b == -math.inf:
            return LogScalar(a)
        return LogScalar(a + math.log1p(2.0 ** (b - a)) * LOG2E)

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        if self.is_zero or other.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log2 + other.log2)

    def scale2(self, k: float) -> "LogScalar":
        """Multiply by 2**k."""
        return self if self.is_zero else LogScalar(self.log2 + k)

    def __float__(self) -> float:
        return exp2(self.log2) if not self.is_zero else 0.0

    def ln(self) -> float:
        return self.log2 * LN2

    @staticmethod
    def sum(values: Iterable["LogScalar"]) -> "LogScalar":
        total = LogScalar.zero()
        for v in values:
            total = total + v
        return total


def slog2(x: Real) -> float:
    """Base-2 super-logarithm in the linear approximation.

    ``slog2(x) = x - 1`` on ``(0, 1]`` and ``slog2(x) = slog2(lg x) + 1``
    above, so it is continuous, strictly increasing, and exact on towers
    of twos: ``slog2(1) = 0``, ``slog2(2) = 1``, ``slog2(65536) = 4``.
    """
    if not x > 0:
        raise DomainError(f"slog2 needs x > 0, got {x!r}")
    height = 0
    while x > 1:
        x = math.log2(x)
        height += 1
    return height + float(x) - 1.0


def lg_minus(x: Real) -> int:
    """Integer part of slog2(x)."""
    return int(slog2(x))


def slog2_of_inverse(eps: Epsilon) -> float:
    """slog2(1/eps), computed from log2(eps) so 2**-e never overflows."""
    eps = Epsilon.of(eps)
    if eps.is_zero:
        return math.inf
    if eps.pow2 is not None:
        return slog2(eps.pow2) + 1.0
    if eps.value >= 1.0:
        return 1.0 / eps.value - 1.0
    return slog2(-math.log2(eps.value)) + 1.0


def iterated_lg(x: Real) -> List[Real]:
    """The chain x, lg x, lg lg x, ... ending at the first value <= 1."""
    if not x > 1:
        raise DomainError(f"iterated_lg needs x > 1, got {x!r}")
    chain: List[Real] = [x]
    while chain[-1] > 1:
        chain.append(math.log2(chain[-1]))
    return chain


def inverse_lg_chain(eps: Epsilon) -> List[float]:
    """lg(1/eps), lg lg(1/eps), ... down to the first value <= 1.

    Same as ``iterated_lg(1/eps)[1:]`` but valid for any dyadic eps.
    """
    eps = Epsilon.of(eps)
    first = -eps.log2
    if not first > 0:
        raise DomainError("need 1/eps > 1")
    return [first] + iterated_lg(first)[1:] if first > 1 else [first]
