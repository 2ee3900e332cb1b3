import pytest
from hypothesis import given
from hypothesis import strategies as st

from chaitin_ensemble.bits import BitString, as_bits, concat, is_prefix

bits = st.text(alphabet="01", max_size=40).map(BitString)


@pytest.mark.parametrize("y, x, want", [("0", "01", True), ("11", "10", False), ("", "1011", True)])
def test_is_prefix_examples(y, x, want):
    assert is_prefix(BitString(y), BitString(x)) is want


@pytest.mark.parametrize("y, z, want", [("11", "0", "110"), ("", "01", "01"), ("10", "", "10")])
def test_concat_examples(y, z, want):
    assert str(concat(BitString(y), BitString(z))) == want


def test_empty_is_valid():
    e = BitString()
    assert len(e) == 0 and str(e) == "" and list(e) == []


def test_rejects_other_characters():
    with pytest.raises(ValueError):
        BitString("012")


def test_immutable():
    b = BitString("101")
    with pytest.raises(AttributeError):
        b._s = "0"


def test_indexing_and_ints():
    b = BitString("1101")
    assert b[0] == 1 and b[2] == 0
    assert b[1:3] == BitString("10")
    assert b.to_int() == 13
    assert BitString.from_int(13) == b
    assert str(BitString.from_int(5, 6)) == "000101"
    with pytest.raises(ValueError):
        BitString.from_int(9, 3)


def test_ordering_is_length_then_value():
    xs = [BitString(s) for s in ("110", "01", "00", "111000", "10")]
    assert [str(x) for x in sorted(xs)] == ["00", "01", "10", "110", "111000"]


def test_long_strings():
    b = BitString("1" * 10**6)
    assert len(b) == 10**6 and is_prefix(b[:10], b)


@given(bits, bits)
def test_prefix_of_concat(y, z):
    assert is_prefix(y, concat(y, z))
    assert len(concat(y, z)) == len(y) + len(z)


@given(bits, bits, bits)
def test_concat_associative(a, b, c):
    assert concat(concat(a, b), c) == concat(a, concat(b, c))


@given(bits)
def test_empty_identity_and_reflexive(a):
    e = BitString("")
    assert concat(e, a) == a == concat(a, e)
    assert is_prefix(a, a)


@given(bits, bits)
def test_prefix_antisymmetric(a, b):
    if is_prefix(a, b) and is_prefix(b, a):
        assert a == b


@given(bits, bits, bits)
def test_prefix_transitive(a, b, c):
    ab, abc = concat(a, b), concat(concat(a, b), c)
    assert is_prefix(a, ab) and is_prefix(ab, abc) and is_prefix(a, abc)


@given(bits)
def test_hash_and_as_bits(a):
    assert as_bits(str(a)) == a and hash(as_bits(str(a))) == hash(a)
    assert as_bits(a) is a
