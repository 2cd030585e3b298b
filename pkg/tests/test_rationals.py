from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logdisc.rationals import (
    RationalFormatError,
    ceil_fraction,
    floor_fraction,
    format_rational,
    format_rational_list,
    lcm_denominators,
    parse_rational,
    parse_rational_list,
)


def test_parse_basics():
    assert parse_rational("2/3") == Fraction(2, 3)
    assert parse_rational("0") == 0
    assert parse_rational("-7/2") == Fraction(-7, 2)
    assert parse_rational("4/6") == Fraction(2, 3)


@pytest.mark.parametrize("bad", ["0.5", "1e3", "two", "1/0", "2/-3", ""])
def test_parse_rejects(bad):
    with pytest.raises(RationalFormatError):
        parse_rational(bad)


def test_format_lowest_terms():
    assert format_rational(Fraction(4, 6)) == "2/3"
    assert format_rational(Fraction(5)) == "5"
    assert format_rational(Fraction(0)) == "0"


@given(st.fractions(max_denominator=10**6))
@settings(max_examples=300, deadline=None)
def test_parse_format_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_list_roundtrip():
    xs = [Fraction(1, 2), Fraction(2, 3), Fraction(0)]
    assert parse_rational_list(format_rational_list(xs)) == xs
    assert parse_rational_list("") == []


def test_lcm_denominators():
    assert lcm_denominators([]) == 1
    assert lcm_denominators([Fraction(1, 2), Fraction(1, 3)]) == 6
    assert lcm_denominators([Fraction(5, 11), Fraction(4, 11)]) == 11


@given(st.fractions(max_denominator=1000))
@settings(max_examples=200, deadline=None)
def test_floor_ceil_match_builtin(x):
    import math

    assert floor_fraction(x) == math.floor(x)
    assert ceil_fraction(x) == math.ceil(x)
