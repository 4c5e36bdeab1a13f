from fractions import Fraction

import pytest

from valuations.errors import ParseError
from valuations.rationals import format_rational, rational_to_float, to_rational


@pytest.mark.parametrize(
    "raw, expected",
    [(3, Fraction(3)), ("3/2", Fraction(3, 2)), ("1.5", Fraction(3, 2)), (" 7 ", Fraction(7)), (Fraction(1, 3), Fraction(1, 3))],
)
def test_to_rational_parses_exact_forms(raw, expected):
    assert to_rational(raw) == expected


@pytest.mark.parametrize("raw", [1.5, True, "abc", "1/0", None])
def test_to_rational_refuses_inexact_or_malformed(raw):
    with pytest.raises(ParseError):
        to_rational(raw)


def test_format_rational_uses_fraction_strings():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(0)) == "0"


def test_rational_to_float():
    assert rational_to_float(Fraction(1, 4)) == 0.25
