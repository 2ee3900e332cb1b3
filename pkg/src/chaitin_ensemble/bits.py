"""Immutable bit strings and the prefix relation."""

from __future__ import annotations

from typing import Iterable, Iterator, Union

_VALID = frozenset("01")


class BitString:
    """An immutable finite sequence of bits.

    Stored as an ASCII ``str`` of ``'0'``/``'1'`` (one byte per bit), which
    keeps slicing, hashing and prefix tests at C speed.  Bits are indexed from
    0 internally; text form is written left to right as in program listings.
    """

    __slots__ = ("_s",)

    def __init__(self, bits: Union[str, "BitString", Iterable[int]] = ""):
        if isinstance(bits, BitString):
            s = bits._s
        elif isinstance(bits, str):
            s = bits
            if not _VALID.issuperset(s):
                raise ValueError(f"not a bit string: {bits!r}")
        else:
            s = "".join("1" if b else "0" for b in bits)
        object.__setattr__(self, "_s", s)

    def __setattr__(self, name, value):
        raise AttributeError("BitString is immutable")

    @classmethod
    def from_int(cls, value: int, width: int | None = None) -> "BitString":
        """Binary numeral of ``value``, most significant bit first."""
        if value < 0:
            raise ValueError("value must be nonnegative")
        s = format(value, "b") if value else ""
        if width is not None:
            if len(s) > width:
                raise ValueError(f"{value} does not fit in {width} bits")
            s = s.rjust(width, "0")
        return cls(s)

    def to_int(self) -> int:
        return int(self._s, 2) if self._s else 0

    def __len__(self) -> int:
        return len(self._s)

    def __iter__(self) -> Iterator[int]:
        return (1 if c == "1" else 0 for c in self._s)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitString(self._s[index])
        return 1 if self._s[index] == "1" else 0

    def __add__(self, other: "BitString") -> "BitString":
        if not isinstance(other, BitString):
            return NotImplemented
        return BitString(self._s + other._s)

    def __eq__(self, other) -> bool:
        if isinstance(other, BitString):
            return self._s == other._s
        return NotImplemented

    def __lt__(self, other: "BitString") -> bool:
        # (length, numeric value) order; for equal lengths this is lexicographic
        return (len(self._s), self._s) < (len(other._s), other._s)

    def __hash__(self) -> int:
        return hash(("BitString", self._s))

    def __str__(self) -> str:
        return self._s

    def __repr__(self) -> str:
        return f"BitString({self._s!r})"

    def is_prefix_of(self, other: "BitString") -> bool:
        return other._s.startswith(self._s)


def is_prefix(y: BitString, x: BitString) -> bool:
    """True iff ``x == y + z`` for some (possibly empty) bit string ``z``."""
    return x._s.startswith(y._s)


def concat(y: BitString, z: BitString) -> BitString:
    return y + z


def as_bits(value: Union[str, BitString]) -> BitString:
    return value if isinstance(value, BitString) else BitString(value)
