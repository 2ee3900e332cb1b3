"""Cross-module consistency checks, run by ``chaitin-ensemble verify``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import mpmath

from .codec import InsufficientBits, decode, enumerate_programs, length_counts
from .machine import Halted, run
from .machines import counting_machine_spec
from .partition import partition_exact, zk_exact
from .prefix_codes import CountingCode, FibonacciCode, GeneralizedFibCode, generation_stats, kraft_partial_sum


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}"


def machine_matches_codec(max_len: int = 12) -> CheckResult:
    spec = counting_machine_spec()
    checked = 0
    for L in range(1, max_len + 1):
        for bits in itertools.product("01", repeat=L):
            s = "".join(bits)
            try:
                d = decode(s)
            except InsufficientBits:
                d = None
            out = run(spec, s)
            if d is None:
                if isinstance(out, Halted):
                    return CheckResult("machine-codec", False, f"machine halted on undecodable {s}")
                continue
            if not (
                isinstance(out, Halted)
                and str(out.output) == "1" * d.N
                and out.program_bits_read == d.bits_consumed
            ):
                return CheckResult("machine-codec", False, f"mismatch on {s}: {out}")
            checked += 1
    return CheckResult("machine-codec", True, f"{checked} strings of length <= {max_len}")


def kraft_sums() -> CheckResult:
    got = kraft_partial_sum(CountingCode(), 13)
    if got != Fraction(31, 32):
        return CheckResult("kraft", False, f"counting code at 13 gives {got}")
    for code in (CountingCode(), FibonacciCode(2), FibonacciCode(3), GeneralizedFibCode()):
        stats = generation_stats(code, 16)
        for a, b in zip(stats, stats[1:]):
            if a.n_red + a.m_black + a.w_white != 1 << a.l or b.Q_l - a.Q_l != a.P_l:
                return CheckResult("kraft", False, f"tree identity broken for {code} at l={a.l}")
    total = sum(Fraction(1, 1 << len(bits)) for bits, _ in enumerate_programs(13))
    if total != Fraction(31, 32):
        return CheckResult("kraft", False, f"enumerated sum {total}")
    return CheckResult("kraft", True, "31/32 at l=13; n+m+w=2^l and P_l=Q_(l+1)-Q_l for l<=16")


def brute_force_partition(eps: float, max_len: int = 40) -> float:
    """Z by explicit length counts up to max_len plus every longer program
    with k <= 4 in closed form (k >= 5 needs l > 2^126)."""
    with mpmath.workdps(40):
        b = mpmath.log(2) + eps
        q = mpmath.e ** (-eps)
        z = sum(c * mpmath.e ** (-b * l) for l, c in length_counts(max_len).items())
        for n2 in range(4, 8):
            for n3 in range(1 << (n2 - 1), 1 << n2):
                head = 6 + n2 + n3
                if head > max_len:
                    z += (1 << (n3 - 1)) * mpmath.e ** (-b * head)
                a = 1 << (n3 - 1)
                z += mpmath.e ** (-b * head) / 2 * q ** a * (1 - q ** a) / (1 - q)
        return z


def partition_brute_force(eps_values=(1.0, 0.5, 0.1), rel: float = 1e-10) -> CheckResult:
    worst = 0.0
    for eps in eps_values:
        want = brute_force_partition(eps)
        got = partition_exact(eps).total
        worst = max(worst, float(abs(got - want) / want))
    return CheckResult("partition-brute-force", worst <= rel, f"max relative error {worst:.3g}")


def criticality() -> CheckResult:
    r = partition_exact(0.0, 1e-6)
    per_k = [float(zk_exact(k, 0.0)) for k in range(7)]
    want = [0.875, 0.0625] + [2.0 ** -(k + 3) for k in range(2, 7)]
    ok = abs(r.total - 1) <= 1e-6 and all(abs(a - b) <= 1e-9 for a, b in zip(per_k, want))
    return CheckResult("criticality", ok, f"Z(0) = {r.total!r}")


CHECKS: List[Callable[[], CheckResult]] = [
    machine_matches_codec,
    kraft_sums,
    partition_brute_force,
    criticality,
]


def run_all() -> List[CheckResult]:
    return [check() for check in CHECKS]
