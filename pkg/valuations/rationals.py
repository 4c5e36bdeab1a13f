from __future__ import annotations

from fractions import Fraction
from typing import Union

from valuations.errors import ParseError

RationalLike = Union[int, str, Fraction]


def to_rational(x: RationalLike) -> Fraction:
    """
    Exact parse of an int, a Fraction, or a string in decimal ("1.5")
    or fraction ("3/2") form. Floats are refused: they are not exact.
    """
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"Refusing inexact value {x!r}; pass a string like '3/2' or '1.5'")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Not a rational: {x!r}") from e
    raise ParseError(f"Unsupported rational type: {type(x).__name__}")


def format_rational(q: Fraction) -> str:
    # fraction strings, never decimals
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_to_float(q: Fraction) -> float:
    return float(Fraction(q))
