import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaitin_ensemble.codec import InsufficientBits, decode, encode, enumerate_programs
from chaitin_ensemble.errors import DomainError
from chaitin_ensemble.machine import (
    ADVANCE,
    BLANK,
    HALT,
    LEFT,
    ONE,
    RIGHT,
    STAY,
    ZERO,
    Halted,
    InvalidWrite,
    MachineConfig,
    MachineSpec,
    MachineSpecError,
    ProgramExhausted,
    StepLimitExceeded,
    Transition,
    WorkTape,
    initial_config,
    run,
    step,
)
from chaitin_ensemble.machines import counting_machine_spec, expander_machine

COUNTING = counting_machine_spec()
EXPANDER = expander_machine()


@pytest.mark.parametrize(
    "program, ones, used",
    [("110", 3, 3), ("00", 0, 2), ("01", 1, 2), ("10", 2, 2), ("1110011010", 13, 10), ("111000", 4, 6)],
)
def test_counting_examples(program, ones, used):
    out = run(COUNTING, program, 10**7)
    assert isinstance(out, Halted)
    assert str(out.output) == "1" * ones and out.program_bits_read == used


def test_counting_needs_third_bit():
    assert isinstance(run(COUNTING, "11", 10**6), ProgramExhausted)
    assert isinstance(run(COUNTING, "", 10**6), ProgramExhausted)


def test_trailing_bits_untouched():
    out = run(COUNTING, "110" + "0101", 10**6)
    assert isinstance(out, Halted) and out.program_bits_read == 3


@pytest.mark.parametrize("work, ones", [("01", 2), ("0", 0), ("1001", 9), ("1", 1), ("0001", 8), ("111", 7)])
def test_expander(work, ones):
    out = run(EXPANDER, "", 10**6, work=work)
    assert isinstance(out, Halted) and str(out.output) == "1" * ones


@given(st.integers(min_value=0, max_value=300))
def test_expander_matches_little_endian_value(b):
    work = format(b, "b")[::-1]
    out = run(EXPANDER, "", 10**7, work=work)
    assert isinstance(out, Halted) and len(out.output) == b and set(str(out.output)) <= {"1"}


def test_expander_first_step():
    config = initial_config(EXPANDER, "", "01")
    config = step(EXPANDER, config)
    assert isinstance(config, MachineConfig)
    assert config.state == 1 and config.head == 1 and config.tape[0] == ZERO


def test_state_counts():
    assert EXPANDER.state_count >= 5
    assert COUNTING.start_state == 8
    assert {5, 6, 7, 8} <= set(COUNTING.states)


def test_exhaustive_equivalence_up_to_10():
    for L in range(1, 11):
        for t in itertools.product("01", repeat=L):
            s = "".join(t)
            out = run(COUNTING, s)
            try:
                d = decode(s)
            except InsufficientBits:
                assert isinstance(out, ProgramExhausted), s
                continue
            assert isinstance(out, Halted), s
            assert len(out.output) == d.N and out.program_bits_read == d.bits_consumed


def test_sampled_equivalence_15_to_20():
    # step count grows like N^2, so keep the sample to N < 512
    rng = random.Random(7)
    programs = [(b, n) for b, n in enumerate_programs(20) if len(b) >= 15 and n < 512]
    for bits, n in rng.sample(programs, 25):
        out = run(COUNTING, bits)
        assert isinstance(out, Halted) and len(out.output) == n and out.program_bits_read == len(bits)


@pytest.mark.parametrize("n", [0, 3, 13, 77, 128, 300])
def test_contiguity_after_every_step(n):
    config = initial_config(COUNTING, encode(n).bits)
    while isinstance(config, MachineConfig):
        config = step(COUNTING, config)
        if isinstance(config, MachineConfig):
            assert config.tape.is_contiguous()
    assert isinstance(config, Halted) and len(config.output) == n


def test_trace_matches_untraced_run():
    rows = []
    traced = run(COUNTING, "1110011010", trace=rows.append)
    plain = run(COUNTING, "1110011010")
    assert traced == plain and len(rows) == plain.steps
    assert rows[0].state == 8 and rows[0].program_head == 0
    assert len(str(rows[0]).split()) == 7


def test_step_limit():
    out = run(COUNTING, "1110011010", step_limit=5)
    assert out == StepLimitExceeded(5)
    with pytest.raises(DomainError):
        run(COUNTING, "110", step_limit=0)


def test_loop_hits_limit():
    table = {(1, s, p): Transition(s, RIGHT, 1, STAY) for s in (ZERO, ONE, BLANK) for p in (ZERO, ONE, BLANK)}
    assert run(MachineSpec(table), "", step_limit=1000) == StepLimitExceeded(1000)


def test_invalid_write_detected():
    # blanking the middle of "101" splits the block
    table = {
        (1, ONE, BLANK): Transition(ONE, RIGHT, 1, STAY),
        (1, ZERO, BLANK): Transition(BLANK, RIGHT, HALT, STAY),
    }
    out = run(MachineSpec(table), "", work="101")
    assert isinstance(out, InvalidWrite) and out.position == 1


def test_missing_transition_raises():
    with pytest.raises(MachineSpecError):
        run(MachineSpec({}), "")


def test_worktape_rules():
    t = WorkTape("01")
    assert not t.write(5, ONE)
    assert t.write(2, ONE) and t.write(-1, ZERO)
    assert str(t.content()) == "0011"
    assert not t.write(1, BLANK)
    assert t.write(-1, BLANK) and str(t.content()) == "011"
    assert t.is_contiguous()


def test_text_round_trip_builtins():
    for spec in (COUNTING, EXPANDER):
        again = MachineSpec.from_text(spec.to_text())
        assert dict(again.transitions) == dict(spec.transitions)
        assert again.start_state == spec.start_state


def test_from_text_errors():
    with pytest.raises(MachineSpecError):
        MachineSpec.from_text("1 0 _ 0 R 1")
    with pytest.raises(MachineSpecError):
        MachineSpec.from_text("1 0 _ 0 R 1 S\n1 0 _ 1 L 2 A")
    with pytest.raises(MachineSpecError):
        MachineSpec.from_text("1 x _ 0 R 1 S")


symbols = st.sampled_from([ZERO, ONE, BLANK])
transitions = st.builds(
    Transition, symbols, st.sampled_from([LEFT, RIGHT]), st.one_of(st.integers(1, 20), st.just(HALT)),
    st.sampled_from([STAY, ADVANCE]),
)
tables = st.dictionaries(st.tuples(st.integers(1, 20), symbols, symbols), transitions, max_size=40)


@given(tables, st.integers(1, 20))
def test_text_round_trip_random(table, start):
    spec = MachineSpec(table, start_state=start)
    again = MachineSpec.from_text(spec.to_text())
    assert dict(again.transitions) == table and again.start_state == start


@given(tables, st.text(alphabet="01", max_size=12), st.text(alphabet="01", max_size=6))
def test_runs_are_deterministic(table, program, work):
    spec = MachineSpec(table)

    def once():
        try:
            return run(spec, program, step_limit=200, work=work)
        except MachineSpecError as exc:
            return str(exc)

    assert once() == once()


@given(tables, st.text(alphabet="01", max_size=12))
def test_halted_reads_at_most_program(table, program):
    try:
        out = run(MachineSpec(table), program, step_limit=200)
    except MachineSpecError:
        return
    if isinstance(out, Halted):
        assert out.program_bits_read <= len(program)
