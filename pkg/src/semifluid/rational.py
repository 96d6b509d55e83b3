"""Exact rational arithmetic for the whole package.

Every length, volume, value and coordinate in this package is a
`fractions.Fraction`: arbitrary precision, always stored in lowest terms
with a positive denominator, totally ordered.  This module adds the text
syntax used in instance and solution files ("3/4", "7") and an explicitly
approximate decimal rendering for human-readable reports.
"""

from __future__ import annotations

import re
from fractions import Fraction

# Package-wide alias for the exact number type.
Rational = Fraction

_FRACTION_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


class FractionSyntaxError(ValueError):
    """A fraction token that does not match ``[-]?digits[/digits]``."""


def parse_fraction(text: str) -> Fraction:
    """Parse ``"n"`` or ``"n/d"`` into an exact, reduced Fraction.

    Raises FractionSyntaxError naming the offending token for malformed
    input or a zero denominator.
    """
    token = text.strip()
    match = _FRACTION_RE.match(token)
    if match is None:
        raise FractionSyntaxError(f"malformed fraction {token!r}")
    numerator = int(match.group(1))
    denominator = match.group(2)
    if denominator is None:
        return Fraction(numerator)
    if int(denominator) == 0:
        raise FractionSyntaxError(f"zero denominator in {token!r}")
    return Fraction(numerator, int(denominator))


def format_fraction(value: Fraction) -> str:
    """Render a Fraction in the file syntax; round-trips with parse_fraction."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, places: int = 6) -> str:
    """Approximate decimal rendering, round-half-even to `places` digits.

    For reports only; exact values always travel as fractions.
    """
    if places < 0:
        raise ValueError("places must be non-negative")
    rounded = round(value, places)  # banker's rounding, exact Fraction result
    sign = "-" if rounded < 0 else ""
    scaled = abs(rounded) * 10**places
    whole, rest = divmod(scaled.numerator, 10**places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{rest:0{places}d}"
