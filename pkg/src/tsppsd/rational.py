"""Parsing and formatting of exact rationals as "p/q" strings."""

from __future__ import annotations

from fractions import Fraction


def parse_fraction(s: str | int | Fraction) -> Fraction:
    """Parse a rational from a "p/q" string (also accepts bare integers)."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    text = s.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_fraction(x: Fraction | int) -> str:
    """Render a rational canonically as "p/q" (denominator always present)."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"
