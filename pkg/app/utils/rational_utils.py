"""
Parsing and formatting helpers for exact rationals and infinite orders
"""

import math
from fractions import Fraction
from typing import List, Union

Order = Union[Fraction, float]

INFINITY_TOKEN = "inf"


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """
    Parse a rational from "p/q", an integer, or a finite decimal string.

    Floats are rejected: exact inputs must stay exact.

    Args:
        value: Textual or integral rational

    Returns:
        Reduced Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        return Fraction(text)
    raise ValueError(f"cannot parse rational from {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """
    Format a rational as "p/q", integers included ("2/1")

    Example:
        >>> format_rational(Fraction(1, 5))
        '1/5'
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_order(value: Union[str, int, Fraction, float]) -> Order:
    """Parse a truncation order; "inf" (or None-like float inf) means untruncated"""
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return math.inf
        raise ValueError("finite orders must be rational")
    if isinstance(value, str) and value.strip().lower() in (INFINITY_TOKEN, "+inf", "infinity"):
        return math.inf
    return parse_rational(value)


def format_order(value: Order) -> str:
    """Format a rational or +inf order"""
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INFINITY_TOKEN
        raise ValueError("finite orders must be rational")
    return format_rational(value)


def rational_grid(low: Fraction, high: Fraction, denominator: int) -> List[Fraction]:
    """
    All rationals with the given denominator strictly between low and high

    Args:
        low: Open lower end
        high: Open upper end
        denominator: Grid denominator

    Returns:
        Sorted grid points
    """
    start = math.floor(low * denominator) + 1
    stop = math.ceil(high * denominator) - 1
    return [Fraction(n, denominator) for n in range(start, stop + 1)]
