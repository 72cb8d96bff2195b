from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from plquot.rationals import format_rational, iroot, parse_rational, rational_root, to_decimal


@pytest.mark.parametrize(
    "text, value",
    [("7", Fraction(7)), ("-3", Fraction(-3)), ("6/4", Fraction(3, 2)), ("+1/3", Fraction(1, 3))],
)
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "a", "1/2/3", "", "1 /2"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


@given(st.fractions())
def test_format_parse_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


def test_to_decimal():
    assert to_decimal(Fraction(5, 6), 4) == "0.8333"
    assert to_decimal(Fraction(-7, 2), 0) == "-4"
    assert to_decimal(Fraction(2), 3) == "2.000"


@given(st.integers(0, 10**40), st.integers(1, 7))
def test_iroot_exact_powers(n, k):
    assert iroot(n**k, k) == n


def test_rational_root():
    assert rational_root(Fraction(16, 81), 4) == Fraction(2, 3)
    assert rational_root(Fraction(2), 2) is None


def test_iroot_large_inputs():
    assert iroot(10**40, 1) == 10**40
    assert iroot(3**500, 5) == 3**100
    assert iroot(3**500 + 1, 5) is None


@given(st.integers(2, 10**30), st.integers(2, 7))
def test_iroot_rejects_non_powers(n, k):
    assert iroot(n**k + 1, k) is None
    assert iroot(n**k - 1, k) is None
