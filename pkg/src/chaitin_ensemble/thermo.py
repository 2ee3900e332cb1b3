"""Free energy, mean program length and heat capacity near beta_c = ln 2.

Units have k_B = 1, so beta = 1/T.  With Z(beta) from the partition engine::

    F   = -ln Z / beta
    <l> = -d ln Z / d beta          (central differences)
    C   = -d ln <l> / d beta        (leading order near criticality)

Derivatives are numeric.  The engine prunes its sums with bounds, which
makes term-wise analytic derivatives fragile; ``check_toy_derivative``
guards the difference scheme against the closed form of Z_0 alone.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, List, Optional, TextIO

from .errors import DomainError
from .numerics import LN2, Epsilon, inverse_lg_chain, lg_minus
from .partition import DEFAULT_CONFIG, EngineConfig, EpsLike, partition_exact

#: eps used to fix the scale of the asymptotic <l> form
CALIBRATION_POW2 = 10


@dataclass(frozen=True)
class ThermoConfig:
    tol: float = 1e-13
    #: default difference step is eps / h_divisor
    h_divisor: float = 16.0
    richardson: bool = False
    engine: EngineConfig = DEFAULT_CONFIG


DEFAULT_THERMO = ThermoConfig()


def _literal(eps: EpsLike) -> float:
    eps = Epsilon.of(eps)
    if eps.is_dyadic:
        eps = eps.to_literal()
    if not eps.value > 0:
        raise DomainError("thermodynamic quantities need eps > 0")
    return eps.value


def ln_z(eps: float, cfg: ThermoConfig = DEFAULT_THERMO) -> float:
    return partition_exact(Epsilon.literal(eps), cfg.tol, cfg.engine).ln_total


def free_energy(eps: EpsLike, cfg: ThermoConfig = DEFAULT_THERMO) -> float:
    e = _literal(eps)
    return -ln_z(e, cfg) / (LN2 + e)


def central_difference(f: Callable[[float], float], x: float, h: float, richardson: bool = False) -> float:
    d = (f(x + h) - f(x - h)) / (2 * h)
    if not richardson:
        return d
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d) / 3


def _step(e: float, h: Optional[float], cfg: ThermoConfig) -> float:
    h = e / cfg.h_divisor if h is None else h
    if not 0 < h < e:
        raise DomainError(f"need 0 < h < eps, got h={h!r}, eps={e!r}")
    return h


def avg_length(eps: EpsLike, h: Optional[float] = None, cfg: ThermoConfig = DEFAULT_THERMO) -> float:
    """<l> = -d ln Z / d beta at beta = ln 2 + eps."""
    e = _literal(eps)
    h = _step(e, h, cfg)
    return -central_difference(lambda x: ln_z(x, cfg), e, h, cfg.richardson)


def heat_capacity(eps: EpsLike, h: Optional[float] = None, cfg: ThermoConfig = DEFAULT_THERMO) -> float:
    """-d ln<l> / d beta, the leading-order heat capacity."""
    e = _literal(eps)
    h = _step(e, h, cfg)
    return -central_difference(lambda x: math.log(avg_length(x, None, cfg)), e, h, cfg.richardson)


def asymptotic_factors(eps: EpsLike) -> List[float]:
    """[eps, lg(1/eps), lg lg(1/eps), ..., L_n, L_n] with n = lg^-(1/eps).

    The last iterated log appears twice (it is squared in the product).
    """
    eps = Epsilon.of(eps)
    chain = inverse_lg_chain(eps)
    if chain[0] <= 1:
        raise DomainError("need 1/eps > 2")
    n = lg_minus(chain[0]) + 1  # lg^-(2^x) = lg^-(x) + 1
    logs = chain[:n]
    return [eps.float_value] + logs + [logs[-1]]


def _bracket_log(eps: EpsLike) -> float:
    """ln of eps * L_1 * ... * L_n^2, safe for any dyadic eps."""
    eps = Epsilon.of(eps)
    factors = asymptotic_factors(eps)
    return eps.log2 * LN2 + sum(math.log(f) for f in factors[1:])


_calibration: dict = {}


def avg_length_asymptotic(eps: EpsLike, cfg: ThermoConfig = DEFAULT_THERMO) -> float:
    """<l> ~ C / (eps L_1 ... L_n^2), with C fixed by matching avg_length at 2^-10."""
    key = (cfg.tol, cfg.h_divisor, cfg.richardson)
    if key not in _calibration:
        ref = Epsilon.dyadic(CALIBRATION_POW2)
        _calibration[key] = math.log(avg_length(ref, None, cfg)) + _bracket_log(ref)
    try:
        return math.exp(_calibration[key] - _bracket_log(eps))
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class ThermoPoint:
    beta: float
    eps: float
    z: float
    F: float
    avg_length: float
    heat_capacity: float
    avg_length_asym: float

    def to_json(self) -> dict:
        # NaN is not valid JSON
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in asdict(self).items()}


def thermo_point(eps: EpsLike, cfg: ThermoConfig = DEFAULT_THERMO) -> ThermoPoint:
    e = _literal(eps)
    r = partition_exact(Epsilon.literal(e), cfg.tol, cfg.engine)
    beta = LN2 + e
    try:
        asym = avg_length_asymptotic(e, cfg)
    except DomainError:
        asym = math.nan  # 1/eps <= 2: no iterated log to speak of
    return ThermoPoint(
        beta=beta,
        eps=e,
        z=r.total,
        F=-r.ln_total / beta,
        avg_length=avg_length(e, None, cfg),
        heat_capacity=heat_capacity(e, None, cfg),
        avg_length_asym=asym,
    )


def check_toy_derivative(beta: float, h: float = 1e-4) -> float:
    """|numeric - analytic| of -d/dbeta ln(3 e^-2b + e^-3b) at beta."""
    lnz = lambda b: math.log(3 * math.exp(-2 * b) + math.exp(-3 * b))
    exact = (6 * math.exp(-2 * beta) + 3 * math.exp(-3 * beta)) / (
        3 * math.exp(-2 * beta) + math.exp(-3 * beta)
    )
    return abs(-central_difference(lnz, beta, h, richardson=True) - exact)


CSV_COLUMNS = ("eps", "beta", "z", "F", "avg_length", "heat_capacity", "avg_length_asym")


def write_thermo_csv(points: Iterable[ThermoPoint], out: Optional[TextIO] = None) -> str:
    buf = out if out is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow([repr(float(getattr(p, c))) for c in CSV_COLUMNS])
    return buf.getvalue() if out is None else ""
