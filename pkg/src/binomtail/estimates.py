"""Certified Stirling-type estimates used to bound binomial point masses.

Robbins' two-sided refinement of Stirling's formula brackets ``n!``; from it
follow a two-sided estimate of ``C(n, k)`` and the upper bound
``Pr[Bin(n, k/n) = k] < sqrt(n / (2 pi k (n-k)))``.  The three monotone
expressions of the form ``(1 - 1/x)^(...)`` that drive the small-case
analysis are evaluated here as well.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .enclosure import DEFAULT_PRECISION, Enclosure, pi, power, refine
from .errors import DomainError


@dataclass(frozen=True)
class FactorialBounds:
    n: int
    lower: Enclosure
    upper: Enclosure

    def separates(self, value: int) -> bool:
        """True if ``lower`` lies strictly below and ``upper`` strictly above ``value``."""
        return self.lower.hi < value < self.upper.lo


def _sqrt_two_pi_n(n, bits: int) -> Enclosure:
    return (2 * pi(bits) * n).sqrt()


def robbins_correction(n: int, bits: int = DEFAULT_PRECISION) -> tuple[Enclosure, Enclosure]:
    """Enclosures of ``exp(1/(12n+1))`` and ``exp(1/(12n))``."""
    if n < 1:
        raise DomainError(f"n={n} must be positive")
    return (
        Enclosure.exact(mpq(1, 12 * n + 1), bits).exp(),
        Enclosure.exact(mpq(1, 12 * n), bits).exp(),
    )


def robbins_factorial_bounds(n: int, bits: int = DEFAULT_PRECISION) -> FactorialBounds:
    """Bracket ``n!`` by ``sqrt(2 pi n) (n/e)^n`` times the Robbins factors.

    Precision is doubled until the bracket separates from the exact ``n!``.
    """
    if n < 1:
        raise DomainError(f"n={n} must be positive")
    target = math.factorial(n)

    def evaluate(b: int) -> FactorialBounds:
        core = _sqrt_two_pi_n(n, b) * Enclosure.exact(-n, b).exp() * (mpq(n) ** n)
        r_lo, r_hi = robbins_correction(n, b)
        return FactorialBounds(n, core * r_lo, core * r_hi)

    _, bounds, _ = refine(evaluate, lambda fb: True if fb.separates(target) else None, bits)
    return bounds


def binomial_correction_exponents(n: int, k: int) -> tuple[mpq, mpq]:
    """Exact exponents of the lower and upper bound on the ratio ``R_{nk}``."""
    if not 1 <= k <= n - 1:
        raise DomainError(f"k={k} outside [1..{n - 1}]")
    m = n - k
    lower = -mpq(1, 12 * k) - mpq(1, 12 * m) + mpq(1, 12 * n + 1)
    upper = -mpq(1, 12 * k + 1) - mpq(1, 12 * m + 1) + mpq(1, 12 * n)
    return lower, upper


def binomial_correction_floor(bits: int = DEFAULT_PRECISION) -> Enclosure:
    """``exp(-1/6 + 1/25)``, the smallest lower correction (attained at n=2)."""
    return Enclosure.exact(mpq(-1, 6) + mpq(1, 25), bits).exp()


def _binomial_core(n: int, k: int, bits: int) -> Enclosure:
    m = n - k
    root = (Enclosure.exact(mpq(n, k * m), bits) / (2 * pi(bits))).sqrt()
    return root * (mpq(n, k) ** k) * (mpq(n, m) ** m)


def binom_coeff_enclosure(n: int, k: int, bits: int = DEFAULT_PRECISION) -> tuple[Enclosure, Enclosure]:
    """Lower and upper Stirling estimates of ``C(n, k)`` for ``1 <= k <= n-1``.

    The returned pair satisfies ``lower.hi < C(n, k) < upper.lo``; precision
    is raised until that is certified.
    """
    lo_exp, hi_exp = binomial_correction_exponents(n, k)
    target = math.comb(n, k)

    def evaluate(b: int) -> tuple[Enclosure, Enclosure]:
        core = _binomial_core(n, k, b)
        return core * Enclosure.exact(lo_exp, b).exp(), core * Enclosure.exact(hi_exp, b).exp()

    def decide(pair):
        lower, upper = pair
        return True if lower.hi < target < upper.lo else None

    _, pair, _ = refine(evaluate, decide, bits)
    return pair


def pmf_upper_bound(n: int, k: int, bits: int = DEFAULT_PRECISION) -> Enclosure:
    """``sqrt(n / (2 pi k (n-k)))``, which exceeds ``Pr[Bin(n, k/n) = k]``."""
    if not 1 <= k <= n - 1:
        raise DomainError(f"k={k} outside [1..{n - 1}]")
    return (Enclosure.exact(mpq(n, k * (n - k)), bits) / (2 * pi(bits))).sqrt()


class MonoKind(str, enum.Enum):
    POW_INC = "pow_inc"    # (1 - 1/x)^(x - 1/2 + alpha), increasing on x >= 1
    POW_DEC = "pow_dec"    # (1 + 1/x)^(x + 1/2 + alpha), decreasing on x > 0
    PAIR_SUM = "pair_sum"  # (1 - 1/x)^x + (1 - 1/x)^(x-1), decreasing on x >= 1


def mono_expr(kind, x, alpha=0, bits: int = DEFAULT_PRECISION) -> Enclosure:
    kind = MonoKind(kind)
    x, alpha = Fraction(x), Fraction(alpha)
    if alpha < 0:
        raise DomainError(f"alpha={alpha} must be non-negative")
    half = Fraction(1, 2)
    if kind is MonoKind.POW_INC:
        if x < 1:
            raise DomainError(f"x={x} outside x >= 1")
        return power(1 - 1 / x, x - half + alpha, bits)
    if kind is MonoKind.POW_DEC:
        if x <= 0:
            raise DomainError(f"x={x} outside x > 0")
        return power(1 + 1 / x, x + half + alpha, bits)
    if x < 1:
        raise DomainError(f"x={x} outside x >= 1")
    base = 1 - 1 / x
    return power(base, x, bits) + power(base, x - 1, bits)
