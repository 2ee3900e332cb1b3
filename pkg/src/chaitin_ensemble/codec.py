"""The counting machine's prefix-free code, implemented without a machine.

Programs have the layout::

    N = 0, 1, 2  ->  00, 01, 10
    N = 3        ->  110
    N >= 4       ->  11 <n_2> ... <n_k> <N> 0

where each ``<x>`` is the binary numeral of ``x`` (most significant bit
first), ``n_k`` is the bit length of ``N``, ``n_(i-1)`` the bit length of
``n_i``, and the chain stops once the bit length 3 is reached.  Every
numeral after the leading ``11`` starts with a 1, and that leading 1 doubles
as the "continue" flag; a 0 in flag position ends the program.

Decoder bookkeeping (0-based ``pos``; the 1-based ``m_i`` are ``pos + 1``)::

    value = 3, pos = 2            # after reading "11"
    while bits[pos] == 1:         # flag = leading bit of the next numeral
        value, pos = int(bits[pos:pos + value]), pos + value
    N = value; consumed = pos + 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .bits import BitString, as_bits
from .errors import DomainError, ResourceBoundError
from .numerics import slog2

#: Largest max_len accepted by enumerate_programs / length counting.
ENUMERATION_BOUND = 30


class InsufficientBits(DomainError):
    """The stream ends before the program it starts is complete."""

    def __init__(self, needed: int, available: int):
        super().__init__(f"program needs at least {needed} bits, stream has {available}")
        self.needed = needed
        self.available = available


@dataclass(frozen=True)
class CountingProgram:
    N: int
    k: int
    chain: Tuple[int, ...]
    length: int
    bits: BitString

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "chain": list(self.chain),
            "length": self.length,
            "bits": str(self.bits),
        }


@dataclass(frozen=True)
class Decoded:
    N: int
    bits_consumed: int


def _numerals(N: int) -> List[int]:
    """[n_2, ..., n_k, N] for N >= 4."""
    fields = []
    v = N
    while True:
        fields.append(v)
        width = v.bit_length()
        if width == 3:
            break
        v = width
    fields.reverse()
    return fields


def iterations_k(N: int) -> int:
    """Iteration count: 0 below 4, else 1 + k(bit length of N)."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    k = 0
    while N >= 4:
        N = N.bit_length()
        k += 1
    return k


def encode(N: int) -> CountingProgram:
    if N < 0:
        raise DomainError("N must be nonnegative")
    if N < 3:
        bits = format(N, "02b")
        return CountingProgram(N, 0, (), 2, BitString(bits))
    if N == 3:
        return CountingProgram(N, 0, (), 3, BitString("110"))
    fields = _numerals(N)
    bits = "11" + "".join(format(f, "b") for f in fields) + "0"
    chain = tuple(fields[:-1])
    return CountingProgram(N, len(fields), chain, len(bits), BitString(bits))


def decode(stream: Union[str, BitString]) -> Decoded:
    """Read one program from the front of ``stream``; trailing bits are ignored."""
    s = str(as_bits(stream))
    if len(s) < 2:
        raise InsufficientBits(2, len(s))
    head = int(s[:2], 2)
    if head < 3:
        return Decoded(head, 2)
    value, pos = 3, 2
    while True:
        if pos >= len(s):
            raise InsufficientBits(pos + 1, len(s))
        if s[pos] == "0":
            return Decoded(value, pos + 1)
        end = pos + value
        if end >= len(s):
            # the numeral plus the next flag bit must be present
            raise InsufficientBits(end + 1, len(s))
        value, pos = int(s[pos:end], 2), end


def program_length(N: int) -> int:
    """Length of the program for N, without building it."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    if N < 3:
        return 2
    if N == 3:
        return 3
    length = 6
    while N >= 8:
        N = N.bit_length()
        length += N
    return length


@dataclass(frozen=True)
class LambdaLadder:
    """Largest chain value after k iterations: 3, 7, 127, 2**127 - 1, ...

    ``value`` is exact for k <= 4 and ``None`` above, where the entry is
    ``2**(previous) - 1`` and only its super-logarithm is kept.
    """

    k: int
    value: Optional[int]
    slog2: float
    previous: Optional["LambdaLadder"] = field(default=None, repr=False, compare=False)

    @property
    def is_exact(self) -> bool:
        return self.value is not None


def lambda_ladder(k: int) -> LambdaLadder:
    if k < 1:
        raise DomainError("k must be >= 1")
    entry = LambdaLadder(1, 3, slog2(3))
    for i in range(2, k + 1):
        if entry.value is not None and i <= 4:
            v = 2 ** entry.value - 1
            entry = LambdaLadder(i, v, slog2(v), entry)
        else:
            # lg(2**L - 1) = L to far below double precision once L >= 127
            if entry.value is not None:
                s = slog2(entry.value) + 1.0
            else:
                s = entry.slog2 + 1.0
            entry = LambdaLadder(i, None, s, entry)
    return entry


def _check_bound(max_len: int) -> None:
    if max_len > ENUMERATION_BOUND:
        raise ResourceBoundError(
            f"max_len={max_len} exceeds the enumeration bound {ENUMERATION_BOUND}"
        )


def iter_chains(max_len: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Yield (n_2..n_k, length) for every k >= 2 chain with 6 + sum <= max_len."""

    def walk(chain, last, length):
        yield chain, length
        lo, hi = 1 << (last - 1), (1 << last) - 1
        for n in range(lo, hi + 1):
            if length + n > max_len:
                break
            yield from walk(chain + (n,), n, length + n)

    for n2 in range(4, 8):
        if 6 + n2 <= max_len:
            yield from walk((n2,), n2, 6 + n2)


def length_counts(max_len: int) -> Dict[int, int]:
    """Number of programs of each length <= max_len (no bound check)."""
    counts: Dict[int, int] = {}

    def add(length, count):
        if length <= max_len:
            counts[length] = counts.get(length, 0) + count

    add(2, 3)
    add(3, 1)
    add(6, 4)
    for chain, length in iter_chains(max_len):
        add(length, 1 << (chain[-1] - 1))
    return dict(sorted(counts.items()))


def enumerate_programs(max_len: int) -> List[Tuple[BitString, int]]:
    """All programs of length <= max_len, ordered by (length, numeric value)."""
    _check_bound(max_len)
    out: List[Tuple[BitString, int]] = []
    if max_len >= 2:
        out += [(BitString(format(n, "02b")), n) for n in range(3)]
    if max_len >= 3:
        out.append((BitString("110"), 3))
    if max_len >= 6:
        out += [(encode(n).bits, n) for n in range(4, 8)]
    for chain, _ in iter_chains(max_len):
        last = chain[-1]
        out += [(encode(n).bits, n) for n in range(1 << (last - 1), 1 << last)]
    out.sort(key=lambda item: (len(item[0]), str(item[0])))
    return out
