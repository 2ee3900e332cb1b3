"""Two-tape Chaitin machine: an unbounded work tape plus a finite read-only
program tape.

Work-tape symbols are ``0``, ``1`` and blank (``2``, printed ``_``).  The
non-blank cells always form one contiguous block: a blank may only be
written next to a blank, and a bit may only be written onto a blank cell that
touches the block.  A transition that breaks this ends the run with
:class:`InvalidWrite`, since it means the table itself is malformed.

The program tape is a blank cell followed by the program bits.  The program
head starts on the blank and can only stay or advance, so the bits it has
visited when the machine halts form a prefix of the tape; reading past the
last bit ends the run with :class:`ProgramExhausted`.

Table text format, one transition per line (``#`` starts a comment)::

    <state> <work> <pin> <write> <move> <next> <advance>

with symbols ``0 1 _``, moves ``L R``, advance ``S`` (stay) or ``A``
(advance), and ``H`` for the halt state.  A ``start <state>`` line sets the
start state (default 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union

from .bits import BitString, as_bits
from .errors import DomainError

ZERO, ONE, BLANK = 0, 1, 2
LEFT, RIGHT = -1, 1
STAY, ADVANCE = 0, 1
HALT = "H"

_SYM_TEXT = {ZERO: "0", ONE: "1", BLANK: "_"}
_TEXT_SYM = {"0": ZERO, "1": ONE, "_": BLANK, "2": BLANK}
_MOVE_TEXT = {LEFT: "L", RIGHT: "R"}
_TEXT_MOVE = {"L": LEFT, "R": RIGHT, "-1": LEFT, "+1": RIGHT}
_ADV_TEXT = {STAY: "S", ADVANCE: "A"}
_TEXT_ADV = {"S": STAY, "A": ADVANCE}

State = Union[int, str]


class MachineSpecError(DomainError):
    """Malformed table, or a transition missing for a reachable situation."""


class Transition(NamedTuple):
    write: int
    move: int
    next_state: State
    advance: int


@dataclass(frozen=True)
class MachineSpec:
    """Transition table keyed by ``(state, work_symbol, program_symbol)``."""

    transitions: Mapping[Tuple[State, int, int], Transition]
    start_state: State = 1
    halt_state: State = HALT
    name: str = ""

    def __post_init__(self):
        for (state, work, pin), t in self.transitions.items():
            if state == self.halt_state:
                raise MachineSpecError("no transition may leave the halt state")
            if work not in _SYM_TEXT or pin not in _SYM_TEXT or t.write not in _SYM_TEXT:
                raise MachineSpecError(f"bad symbol in transition {(state, work, pin)}")
            if t.move not in _MOVE_TEXT or t.advance not in _ADV_TEXT:
                raise MachineSpecError(f"bad move/advance in transition {(state, work, pin)}")

    @property
    def states(self) -> List[State]:
        seen = {s for s, _, _ in self.transitions}
        seen |= {t.next_state for t in self.transitions.values()}
        seen.add(self.start_state)
        seen.discard(self.halt_state)
        return sorted(seen, key=str)

    @property
    def state_count(self) -> int:
        """Number of states including the halt state."""
        return len(self.states) + 1

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"# {self.name}")
        lines.append(f"start {self.start_state}")
        for (state, work, pin), t in sorted(self.transitions.items(), key=lambda kv: (str(kv[0][0]).zfill(4), kv[0][1], kv[0][2])):
            lines.append(
                f"{state} {_SYM_TEXT[work]} {_SYM_TEXT[pin]} "
                f"{_SYM_TEXT[t.write]} {_MOVE_TEXT[t.move]} {t.next_state} {_ADV_TEXT[t.advance]}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = "") -> "MachineSpec":
        table: Dict[Tuple[State, int, int], Transition] = {}
        start: State = 1
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "start" and len(parts) == 2:
                    start = _parse_state(parts[1])
                    continue
                if len(parts) != 7:
                    raise ValueError("expected 7 fields")
                state, work, pin, write, move, nxt, adv = parts
                key = (_parse_state(state), _TEXT_SYM[work], _TEXT_SYM[pin])
                if key in table:
                    raise ValueError(f"duplicate transition {key}")
                table[key] = Transition(
                    _TEXT_SYM[write], _TEXT_MOVE[move], _parse_state(nxt), _TEXT_ADV[adv]
                )
            except (KeyError, ValueError) as exc:
                raise MachineSpecError(f"line {lineno}: {raw.strip()!r}: {exc}") from None
        return cls(table, start_state=start, name=name)


def _parse_state(text: str) -> State:
    return HALT if text == HALT else int(text)


class WorkTape:
    """Two-sided growable tape; cells outside the buffer are blank."""

    __slots__ = ("cells", "offset", "lo", "hi")

    def __init__(self, content: Union[str, BitString] = "", start: int = 0):
        s = str(content)
        self.cells = bytearray(_TEXT_SYM[c] for c in s) or bytearray([BLANK])
        self.offset = -start
        # bounds of the non-blank block; lo > hi when empty
        self.lo, self.hi = (start, start + len(s) - 1) if s else (0, -1)

    def __getitem__(self, pos: int) -> int:
        i = pos + self.offset
        if 0 <= i < len(self.cells):
            return self.cells[i]
        return BLANK

    def _ensure(self, pos: int) -> int:
        i = pos + self.offset
        if i < 0:
            grow = max(-i, len(self.cells))
            self.cells[0:0] = bytes([BLANK]) * grow
            self.offset += grow
            i += grow
        elif i >= len(self.cells):
            self.cells.extend(bytes([BLANK]) * max(i - len(self.cells) + 1, len(self.cells)))
        return i

    def write(self, pos: int, symbol: int) -> bool:
        """Write ``symbol``; return False (tape unchanged) if contiguity would break."""
        current = self[pos]
        if symbol == BLANK:
            if current != BLANK:
                if pos == self.lo == self.hi:
                    self.lo, self.hi = 0, -1
                elif pos == self.lo:
                    self.lo += 1
                elif pos == self.hi:
                    self.hi -= 1
                else:
                    return False
        elif current == BLANK:
            if self.lo > self.hi:
                self.lo = self.hi = pos
            elif pos == self.lo - 1:
                self.lo = pos
            elif pos == self.hi + 1:
                self.hi = pos
            else:
                return False
        self.cells[self._ensure(pos)] = symbol
        return True

    def content(self) -> BitString:
        if self.lo > self.hi:
            return BitString("")
        a, b = self.lo + self.offset, self.hi + self.offset
        return BitString(self.cells[a : b + 1].decode("ascii", "strict").translate(_DIGITS))

    def is_contiguous(self) -> bool:
        """Full scan check of the block invariant (used by tests)."""
        marked = [i - self.offset for i, c in enumerate(self.cells) if c != BLANK]
        if not marked:
            return self.lo > self.hi
        return (
            marked == list(range(marked[0], marked[-1] + 1))
            and (self.lo, self.hi) == (marked[0], marked[-1])
        )


_DIGITS = str.maketrans({"\x00": "0", "\x01": "1"})


@dataclass
class MachineConfig:
    """Live state of one run; owned by that run only."""

    program: BitString
    tape: WorkTape = field(default_factory=WorkTape)
    state: State = 1
    head: int = 0
    program_head: int = 0
    steps: int = 0

    def program_symbol(self) -> Optional[int]:
        """Symbol under the program head; None when past the end."""
        p = self.program_head
        if p == 0:
            return BLANK
        if p <= len(self.program):
            return self.program[p - 1]
        return None


@dataclass(frozen=True)
class Halted:
    output: BitString
    program_bits_read: int
    steps: int


@dataclass(frozen=True)
class StepLimitExceeded:
    steps: int


@dataclass(frozen=True)
class ProgramExhausted:
    bits_available: int
    steps: int = 0


@dataclass(frozen=True)
class InvalidWrite:
    step: int
    position: int


RunOutcome = Union[Halted, StepLimitExceeded, ProgramExhausted, InvalidWrite]


class TraceRow(NamedTuple):
    step: int
    state: State
    head: int
    program_head: int
    read: int
    program_read: int
    write: int

    def __str__(self) -> str:
        return (
            f"{self.step} {self.state} {self.head} {self.program_head} "
            f"{_SYM_TEXT[self.read]} {_SYM_TEXT[self.program_read]} {_SYM_TEXT[self.write]}"
        )


DEFAULT_STEP_LIMIT = 10**7


def initial_config(
    spec: MachineSpec, program: Union[str, BitString] = "", work: Union[str, BitString] = ""
) -> MachineConfig:
    """Head on the first work cell, program head on the leading blank."""
    return MachineConfig(as_bits(program), WorkTape(work), spec.start_state)


def _halted(config: MachineConfig) -> Halted:
    return Halted(config.tape.content(), config.program_head, config.steps)


def step(
    spec: MachineSpec, config: MachineConfig, trace: Optional[Callable[[TraceRow], None]] = None
) -> Union[MachineConfig, RunOutcome]:
    """Apply one transition in place; return the config, or the outcome if the run ended."""
    if config.state == spec.halt_state:
        return _halted(config)
    pin = config.program_symbol()
    if pin is None:
        return ProgramExhausted(len(config.program), config.steps)
    read = config.tape[config.head]
    try:
        t = spec.transitions[(config.state, read, pin)]
    except KeyError:
        raise MachineSpecError(
            f"no transition for state {config.state}, work {_SYM_TEXT[read]}, program {_SYM_TEXT[pin]}"
        ) from None
    if trace is not None:
        trace(TraceRow(config.steps, config.state, config.head, config.program_head, read, pin, t.write))
    if not config.tape.write(config.head, t.write):
        return InvalidWrite(config.steps, config.head)
    config.head += t.move
    config.program_head += t.advance
    config.state = t.next_state
    config.steps += 1
    if config.state == spec.halt_state:
        return _halted(config)
    return config


def run(
    spec: MachineSpec,
    program: Union[str, BitString] = "",
    step_limit: int = DEFAULT_STEP_LIMIT,
    work: Union[str, BitString] = "",
    trace: Optional[Callable[[TraceRow], None]] = None,
) -> RunOutcome:
    """Run from the initial configuration until halting or ``step_limit`` steps."""
    if step_limit < 1:
        raise DomainError("step_limit must be >= 1")
    config = initial_config(spec, program, work)
    if trace is not None:
        return _run_slow(spec, config, step_limit, trace)
    return _run_fast(spec, config, step_limit)


def _run_slow(spec, config, step_limit, trace) -> RunOutcome:
    while config.steps < step_limit:
        result = step(spec, config, trace)
        if result is not config:
            return result
    return StepLimitExceeded(config.steps)


def _run_fast(spec: MachineSpec, config: MachineConfig, step_limit: int) -> RunOutcome:
    # Same semantics as repeated step(), with the tape and tables held in locals.
    index = {}
    states = {}
    for (s, w, p), t in spec.transitions.items():
        si = states.setdefault(s, len(states))
        index[(si, w, p)] = t
    halt = spec.halt_state
    states.setdefault(config.state, len(states))  # start may have no transitions
    nstates = len(states) + 1
    halt_i = states.setdefault(halt, nstates - 1)
    table: List[Optional[Tuple[int, int, int, int]]] = [None] * (nstates * 9)
    for (si, w, p), t in index.items():
        nxt = states.get(t.next_state)
        if nxt is None:
            nxt = states[t.next_state] = len(states)
            table.extend([None] * 9)
        table[si * 9 + w * 3 + p] = (t.write, t.move, nxt, t.advance)
    names = {i: s for s, i in states.items()}

    prog = [BLANK] + list(config.program)
    plen = len(prog)
    tape = config.tape
    state = states[config.state]
    head, phead, steps = config.head, config.program_head, config.steps
    cells, offset = tape.cells, tape.offset

    def sync():
        config.state, config.head, config.program_head, config.steps = names[state], head, phead, steps

    while steps < step_limit:
        if state == halt_i:
            sync()
            return _halted(config)
        if phead >= plen:
            sync()
            return ProgramExhausted(len(config.program), steps)
        i = head + offset
        read = cells[i] if 0 <= i < len(cells) else BLANK
        t = table[state * 9 + read * 3 + prog[phead]]
        if t is None:
            sync()
            raise MachineSpecError(
                f"no transition for state {names[state]}, work {_SYM_TEXT[read]}, "
                f"program {_SYM_TEXT[prog[phead]]}"
            )
        write, move, state_next, adv = t
        if write != read or write == BLANK:
            if not tape.write(head, write):
                sync()
                return InvalidWrite(steps, head)
            cells, offset = tape.cells, tape.offset
        head += move
        phead += adv
        state = state_next
        steps += 1
    sync()
    if state == halt_i:
        return _halted(config)
    return StepLimitExceeded(steps)
