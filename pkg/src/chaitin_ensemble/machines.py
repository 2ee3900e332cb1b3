"""Hand-written tables: the binary-to-unary expander and the counting machine.

Expander (numeral least-significant bit first, head on its first cell, so
``01`` is two).  The tape is kept as ``1^u 0 b_0 ... b_(k-1)``: a unary
count, a separator, and the binary remainder.  Each round decrements the
binary part and adds a 1 on the far left; when the decrement borrows off
the right end the binary part was zero, and it is erased together with the
separator.

====  ==========================================================
state role
====  ==========================================================
1     sweep right to the end of the numeral
2     sweep back left, write the separator on the left blank
3     decrement from the least significant bit
4     walk left to the blank, append one unary 1
9     walk right over the unary part to the separator
10    erase the (all ones after borrowing) binary part and separator
11    walk to the first 1 and halt there
====  ==========================================================

Counting machine: the expander plus

====  ==========================================================
8     start: step the program head onto p1
6     read p1
7     read p2 after p1 = 1
12    read p2 after p1 = 0
13    finish ``10`` -> ``11``
14    finish ``11``: work tape holds 3 (``11``), start the expander
15    expansion done, program head on a flag bit: 0 halts, 1 copies
5     copy the next numeral from the program tape over the unary 1s,
      right to left, so the new numeral reads LSB first
====  ==========================================================
"""

from __future__ import annotations

from typing import Dict, Iterable, Tuple

from .machine import (
    ADVANCE,
    BLANK,
    HALT,
    LEFT,
    ONE,
    RIGHT,
    STAY,
    ZERO,
    MachineSpec,
    Transition,
)

_B, _0, _1 = BLANK, ZERO, ONE
_ANY = (ZERO, ONE, BLANK)


def _expander_rows(finish_state):
    """(state, work) -> (write, move, next) rows, independent of the program tape."""
    return {
        (1, _0): (_0, RIGHT, 1),
        (1, _1): (_1, RIGHT, 1),
        (1, _B): (_B, LEFT, 2),
        (2, _0): (_0, LEFT, 2),
        (2, _1): (_1, LEFT, 2),
        (2, _B): (_0, RIGHT, 3),
        (3, _0): (_1, RIGHT, 3),
        (3, _1): (_0, LEFT, 4),
        (3, _B): (_B, LEFT, 10),
        (4, _0): (_0, LEFT, 4),
        (4, _1): (_1, LEFT, 4),
        (4, _B): (_1, RIGHT, 9),
        (9, _1): (_1, RIGHT, 9),
        (9, _0): (_0, RIGHT, 3),
        (10, _1): (_B, LEFT, 10),
        (10, _0): (_B, LEFT, finish_state),
        (11, _1): (_1, LEFT, 11),
        (11, _B): (_B, RIGHT, HALT),
    }


def _spread(rows, pins: Iterable[int]) -> Dict[Tuple[object, int, int], Transition]:
    table = {}
    for (state, work), (write, move, nxt) in rows.items():
        for pin in pins:
            table[(state, work, pin)] = Transition(write, move, nxt, STAY)
    return table


def expander_machine() -> MachineSpec:
    """Turns a work tape holding b (LSB first) into b ones; ignores the program tape."""
    return MachineSpec(_spread(_expander_rows(11), _ANY), start_state=1, name="expander")


def counting_machine_spec() -> MachineSpec:
    """Outputs N ones for the program of N and halts on its last bit."""
    table = _spread(_expander_rows(15), (ZERO, ONE))

    def put(state, work, pin, write, move, nxt, advance=STAY):
        table[(state, work, pin)] = Transition(write, move, nxt, advance)

    put(8, _B, _B, _B, RIGHT, 6, ADVANCE)
    put(6, _B, _0, _B, RIGHT, 12, ADVANCE)
    put(6, _B, _1, _B, RIGHT, 7, ADVANCE)
    put(12, _B, _0, _B, RIGHT, HALT)  # 00 -> empty
    put(12, _B, _1, _1, RIGHT, HALT)  # 01 -> 1
    put(7, _B, _0, _1, RIGHT, 13)  # 10 -> 11
    put(13, _B, _0, _1, RIGHT, HALT)
    put(7, _B, _1, _1, RIGHT, 14, ADVANCE)  # 11 -> numeral 3, head onto p3
    for pin in (_0, _1):
        put(14, _B, pin, _1, LEFT, 1)
    put(15, _1, _0, _1, LEFT, 11)
    put(15, _B, _0, _B, RIGHT, HALT)
    put(15, _1, _1, _1, LEFT, 5, ADVANCE)  # the flag is the numeral's top bit
    for pin in (_0, _1):
        put(5, _1, pin, pin, LEFT, 5, ADVANCE)
        put(5, _B, pin, _B, RIGHT, 1)
    return MachineSpec(table, start_state=8, name="counting")
