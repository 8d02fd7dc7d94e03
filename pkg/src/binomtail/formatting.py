"""Decimal renderings of exact rationals and enclosures."""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction

from .enclosure import Enclosure


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def truncate_decimal(q, places: int = 4) -> str:
    """Round toward zero to ``places`` decimals, e.g. 0.36559... -> "0.3655"."""
    q = _frac(q)
    scale = 10**places
    sign = "-" if q < 0 else ""
    units = abs(q) * scale
    whole = units.numerator // units.denominator
    int_part, frac_part = divmod(whole, scale)
    return f"{sign}{int_part}.{frac_part:0{places}d}"


def certified_truncation(enc: Enclosure, places: int = 4) -> str | None:
    """Truncated value of the enclosed real, or None if the endpoints disagree."""
    lo, hi = truncate_decimal(enc.lo, places), truncate_decimal(enc.hi, places)
    if lo != hi:
        return None
    # truncation toward zero is not monotone across 0
    if enc.lo < 0 < enc.hi:
        return None
    return lo


def _terminating_exponent(den: int) -> int | None:
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    return max(twos, fives) if den == 1 else None


def format_rational(q, max_digits: int = 20) -> str:
    """Exact decimal when the expansion terminates, else ``max_digits`` significant digits."""
    q = _frac(q)
    e = _terminating_exponent(q.denominator)
    if e is None:
        ctx = Context(prec=max_digits, rounding=ROUND_HALF_EVEN)
        return str(ctx.divide(Decimal(q.numerator), Decimal(q.denominator)))
    scaled = abs(q.numerator) * (10**e // q.denominator)
    sign = "-" if q < 0 else ""
    if e == 0:
        return f"{sign}{scaled}"
    digits = str(scaled).rjust(e + 1, "0")
    return f"{sign}{digits[:-e]}.{digits[-e:]}".rstrip("0").rstrip(".")


def format_significant(q, digits: int = 12) -> str:
    q = _frac(q)
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    return str(ctx.divide(Decimal(q.numerator), Decimal(q.denominator)))


def format_enclosure(enc: Enclosure) -> str:
    """Exact decimal for zero-width enclosures, else the midpoint to 12 digits."""
    if enc.is_exact:
        return format_rational(enc.lo)
    return format_significant(enc.midpoint, 12)


def format_width(width) -> str:
    if width == 0:
        return "0"
    return format(Decimal(int(width.numerator)) / Decimal(int(width.denominator)), ".3e")
