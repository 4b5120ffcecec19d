"""Parsing of numeric command-line values."""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction


def parse_fraction(text: str) -> Fraction:
    """Exact rational from ``"3/7"``, ``"0.25"``, ``"1e-6"`` or ``"10"``."""
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return Fraction(Decimal(text))
    except (ValueError, ZeroDivisionError, InvalidOperation):
        raise ValueError(f"not a rational number: {text!r}") from None


def parse_int(text: str) -> int:
    """Integer from ``"10000000"`` or ``"1e7"``; rejects non-integral values."""
    f = parse_fraction(text)
    if f.denominator != 1:
        raise ValueError(f"not an integer: {text!r}")
    return int(f)
