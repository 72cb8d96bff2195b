"""Helpers around :class:`fractions.Fraction`: strict parsing, printing, roots."""

from __future__ import annotations

import math
import re
from fractions import Fraction

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?\Z")


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q``. Decimals and exponents are rejected."""
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_decimal(q: Fraction, digits: int) -> str:
    """Fixed-point rendering of ``q`` with ``digits`` places, rounded half-even."""
    q = Fraction(q)
    scaled = round(q * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of ``n >= 0``, or None."""
    if n < 0:
        return None
    if n < 2:
        return n
    if k == 1:
        return n
    # integer Newton from above; a float seed is too coarse for large n
    r = 1 << -(-n.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    return r if r**k == n else None


def rational_root(q: Fraction, k: int) -> Fraction | None:
    """Exact positive k-th root of a positive rational, or None."""
    num = iroot(q.numerator, k)
    if num is None:
        return None
    den = iroot(q.denominator, k)
    if den is None:
        return None
    return Fraction(num, den)


def log_ratio(x: Fraction, y: Fraction) -> float:
    """Float estimate of log(x / y) that survives huge numerators."""
    return (
        math.log(x.numerator) - math.log(x.denominator)
        - math.log(y.numerator) + math.log(y.denominator)
    )
