"""Interval enclosures with outward (directed) rounding.

An :class:`Enclosure` is a pair ``lo <= hi`` of exact rationals guaranteed
to bracket a real number.  Endpoints produced by rounding are dyadic
rationals with ``precision_bits`` significant bits; an enclosure built from
an exact rational keeps that rational as both endpoints (zero width).

Rounding and the transcendental kernels (``exp``, ``log``, ``sqrt``, ``pi``)
are delegated to MPFR through gmpy2, whose results are correctly rounded in
the requested direction.  Inputs are always rounded toward the safe side
before being fed to a monotone function, so every step preserves
containment.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Callable, TypeVar

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import DomainError, IndeterminateError

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024

T = TypeVar("T")


@lru_cache(maxsize=None)
def _down(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def _up(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp)


def _q(x) -> mpq:
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, float):
        raise TypeError("binary floats are not accepted; pass a Fraction or int")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def round_down(q, bits: int) -> mpq:
    """Largest dyadic with ``bits`` significant bits that is ``<= q``."""
    return mpq(mpfr(_q(q), bits, _down(bits)))


def round_up(q, bits: int) -> mpq:
    """Smallest dyadic with ``bits`` significant bits that is ``>= q``."""
    return mpq(mpfr(_q(q), bits, _up(bits)))


def to_fraction(q) -> Fraction:
    q = _q(q)
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class Enclosure:
    lo: mpq
    hi: mpq
    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "lo", _q(self.lo))
        object.__setattr__(self, "hi", _q(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value, bits: int = DEFAULT_PRECISION) -> Enclosure:
        q = _q(value)
        return cls(q, q, bits)

    @classmethod
    def around(cls, lo, hi, bits: int) -> Enclosure:
        """Enclosure of ``[lo, hi]`` with endpoints rounded outward."""
        return cls(round_down(lo, bits), round_up(hi, bits), bits)

    # -- inspection ---------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    @property
    def midpoint(self) -> mpq:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = _q(x)
        return self.lo <= x <= self.hi

    def within(self, other: Enclosure) -> bool:
        """True if this enclosure is nested inside ``other``."""
        return other.lo <= self.lo and self.hi <= other.hi

    def compare(self, x) -> int | None:
        """Sign of ``value - x`` when decided by the endpoints, else None.

        Returns 0 only for an exact enclosure equal to ``x``.
        """
        x = _q(x)
        if self.lo > x:
            return 1
        if self.hi < x:
            return -1
        if self.lo == self.hi == x:
            return 0
        return None

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> Enclosure:
        if isinstance(other, Enclosure):
            return other
        return Enclosure.exact(other, self.precision_bits)

    def _result(self, other: Enclosure, lo, hi) -> Enclosure:
        bits = max(self.precision_bits, other.precision_bits)
        if self.is_exact and other.is_exact:
            return Enclosure(lo, lo, bits)
        return Enclosure(round_down(lo, bits), round_up(hi, bits), bits)

    def __add__(self, other) -> Enclosure:
        other = self._coerce(other)
        return self._result(other, self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> Enclosure:
        return Enclosure(-self.hi, -self.lo, self.precision_bits)

    def __sub__(self, other) -> Enclosure:
        other = self._coerce(other)
        return self._result(other, self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> Enclosure:
        return self._coerce(other) - self

    def __mul__(self, other) -> Enclosure:
        other = self._coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return self._result(other, min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other) -> Enclosure:
        other = self._coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        quotients = (self.lo / other.lo, self.lo / other.hi, self.hi / other.lo, self.hi / other.hi)
        return self._result(other, min(quotients), max(quotients))

    def __rtruediv__(self, other) -> Enclosure:
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> Enclosure:
        if not isinstance(exponent, int):
            raise TypeError("use power() for non-integer exponents")
        if exponent < 0:
            return 1 / (self ** -exponent)
        if self.is_exact:
            return Enclosure.exact(self.lo ** exponent, self.precision_bits)
        lo_p, hi_p = self.lo ** exponent, self.hi ** exponent
        if exponent % 2 == 1 or self.lo >= 0:
            lo, hi = lo_p, hi_p
        elif self.hi <= 0:
            lo, hi = hi_p, lo_p
        else:
            lo, hi = mpq(0), max(lo_p, hi_p)
        bits = self.precision_bits
        return Enclosure(round_down(lo, bits), round_up(hi, bits), bits)

    # -- elementary functions ---------------------------------------------

    def sqrt(self) -> Enclosure:
        if self.lo < 0:
            raise DomainError("square root of an enclosure reaching below zero")
        bits = self.precision_bits
        if self.is_exact:
            num, den = self.lo.numerator, self.lo.denominator
            if gmpy2.is_square(num) and gmpy2.is_square(den):
                return Enclosure.exact(mpq(gmpy2.isqrt(num), gmpy2.isqrt(den)), bits)
        lo = _down(bits).sqrt(mpfr(self.lo, bits, _down(bits)))
        hi = _up(bits).sqrt(mpfr(self.hi, bits, _up(bits)))
        return Enclosure(mpq(lo), mpq(hi), bits)

    def exp(self) -> Enclosure:
        bits = self.precision_bits
        if self.is_exact and self.lo == 0:
            return Enclosure.exact(1, bits)
        lo = _down(bits).exp(mpfr(self.lo, bits, _down(bits)))
        hi = _up(bits).exp(mpfr(self.hi, bits, _up(bits)))
        return Enclosure(mpq(lo), mpq(hi), bits)

    def log(self) -> Enclosure:
        if self.lo <= 0:
            raise DomainError("logarithm of an enclosure reaching zero or below")
        bits = self.precision_bits
        if self.is_exact and self.lo == 1:
            return Enclosure.exact(0, bits)
        lo = _down(bits).log(mpfr(self.lo, bits, _down(bits)))
        hi = _up(bits).log(mpfr(self.hi, bits, _up(bits)))
        return Enclosure(mpq(lo), mpq(hi), bits)

    def __repr__(self) -> str:
        if self.is_exact:
            return f"Enclosure(exact={self.lo})"
        return f"Enclosure([{float(self.lo)!r}, {float(self.hi)!r}], bits={self.precision_bits})"

    def to_json(self, digits: int = 30) -> dict:
        return {
            "lo": decimal_floor(self.lo, digits),
            "hi": decimal_ceil(self.hi, digits),
            "bits": self.precision_bits,
        }


def _decimal(q, digits: int, rounding) -> str:
    q = _q(q)
    ctx = Context(prec=digits, rounding=rounding)
    value = ctx.divide(Decimal(int(q.numerator)), Decimal(int(q.denominator)))
    return str(value)


def decimal_floor(q, digits: int = 30) -> str:
    """Decimal string with ``digits`` significant digits, rounded toward -inf."""
    return _decimal(q, digits, ROUND_FLOOR)


def decimal_ceil(q, digits: int = 30) -> str:
    return _decimal(q, digits, ROUND_CEILING)


@lru_cache(maxsize=None)
def pi(bits: int = DEFAULT_PRECISION) -> Enclosure:
    return Enclosure(mpq(_down(bits).const_pi()), mpq(_up(bits).const_pi()), bits)


def power(base, exponent, bits: int = DEFAULT_PRECISION) -> Enclosure:
    """Enclosure of ``base ** exponent`` for rationals ``base >= 0``, ``exponent``.

    Integer exponents take an exact rational path.  ``0 ** 0`` is 1.
    """
    base, exponent = _q(base), _q(exponent)
    if base < 0:
        raise DomainError("negative base")
    if exponent.denominator == 1:
        e = int(exponent)
        if base == 0 and e < 0:
            raise DomainError("zero to a negative power")
        return Enclosure.exact(base ** e, bits)
    if base == 0:
        if exponent < 0:
            raise DomainError("zero to a negative power")
        return Enclosure.exact(0, bits)
    return (Enclosure.exact(base, bits).log() * exponent).exp()


def refine(
    evaluate: Callable[[int], T],
    decide: Callable[[T], object],
    bits: int = DEFAULT_PRECISION,
    max_bits: int = MAX_PRECISION,
) -> tuple[object, T, int]:
    """Re-run ``evaluate`` at doubling precision until ``decide`` answers.

    ``decide`` returns None while the question is still open.  Returns the
    answer, the last evaluated value and the precision it was computed at.
    Raises IndeterminateError once ``max_bits`` has been tried.
    """
    bits = min(bits, max_bits)
    while True:
        value = evaluate(bits)
        answer = decide(value)
        if answer is not None:
            return answer, value, bits
        if bits >= max_bits:
            raise IndeterminateError(f"undecided at {bits} bits", value)
        bits = min(2 * bits, max_bits)

