"""Exact rational helpers: parsing, rendering and lcm utilities.

All arithmetic in this package is done with ``fractions.Fraction``;
floats are rejected at every boundary.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class RationalFormatError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or a plain integer. Decimal notation is rejected."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise RationalFormatError(f"not a rational (expected p/q or integer): {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise RationalFormatError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x: Fraction) -> str:
    """Render in lowest terms, ``p/q`` or a bare integer."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational_list(text: str) -> list[Fraction]:
    """Parse a comma-separated list; the empty string is the empty list."""
    text = text.strip()
    if not text:
        return []
    return [parse_rational(part) for part in text.split(",")]


def format_rational_list(xs) -> str:
    return ",".join(format_rational(x) for x in xs)


def lcm_denominators(xs) -> int:
    """lcm of denominators; 1 for an empty sequence."""
    out = 1
    for x in xs:
        out = math.lcm(out, Fraction(x).denominator)
    return out


def floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)
