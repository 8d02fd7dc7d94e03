"""Exact arithmetic for Bin(n, p) with rational success probability.

Everything here is integer or :class:`fractions.Fraction` arithmetic; no
binary floating point is involved.  For ``p = a/b`` in lowest terms the
point masses share the denominator ``b**n``, so the kernel works with the
integer numerators ``C(n, i) * a**i * (b - a)**(n - i)`` and divides once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import DomainError

ExactProb = Fraction


def parse_probability(value) -> Fraction:
    """Convert ``value`` to an exact rational in [0, 1].

    Accepts ints, rationals (Fraction, gmpy2.mpq) and strings such as
    ``"2/7"`` or ``"0.125"``.  Floats are rejected: their binary expansion is
    rarely the number the caller meant.
    """
    if isinstance(value, (bool, float)):
        raise TypeError(f"probability must be exact, got {type(value).__name__}")
    if isinstance(value, str):
        try:
            q = Fraction(value.strip())
        except ValueError:
            raise DomainError(f"cannot parse probability {value!r}") from None
    elif isinstance(value, Rational):
        q = Fraction(int(value.numerator), int(value.denominator))
    else:
        raise TypeError(f"unsupported probability type {type(value).__name__}")
    if not 0 <= q <= 1:
        raise DomainError(f"probability {q} outside [0, 1]")
    return q


@dataclass(frozen=True)
class BinomialSpec:
    n: int
    p: Fraction

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "p", parse_probability(self.p))

    @property
    def mean(self) -> Fraction:
        return self.n * self.p

    @property
    def floor_mean(self) -> int:
        m = self.mean
        return m.numerator // m.denominator

    @property
    def ceil_mean(self) -> int:
        m = self.mean
        return -(-m.numerator // m.denominator)


@lru_cache(maxsize=512)
def _weights(spec: BinomialSpec) -> tuple[tuple[int, ...], int]:
    n = spec.n
    a, b = spec.p.numerator, spec.p.denominator
    c = b - a
    c_pow = [1] * (n + 1)
    for i in range(1, n + 1):
        c_pow[i] = c_pow[i - 1] * c
    weights = []
    coef, a_pow = 1, 1  # 0**0 == 1 in Python ints, matching the convention
    for i in range(n + 1):
        weights.append(coef * a_pow * c_pow[n - i])
        coef = coef * (n - i) // (i + 1)
        a_pow *= a
    return tuple(weights), b**n


def pmf(spec: BinomialSpec, i: int) -> Fraction:
    if not 0 <= i <= spec.n:
        raise DomainError(f"i={i} outside [0..{spec.n}]")
    weights, den = _weights(spec)
    return Fraction(weights[i], den)


def tail_ge(spec: BinomialSpec, t: int, *, order: str = "auto") -> Fraction:
    """Pr[X >= t].

    ``order`` selects the summation: ``"upper"`` adds the masses ``t..n``,
    ``"lower"`` subtracts the masses ``0..t-1`` from one, ``"auto"`` picks
    the shorter of the two.  All three agree exactly.
    """
    n = spec.n
    if t <= 0:
        return Fraction(1)
    if t > n:
        return Fraction(0)
    weights, den = _weights(spec)
    if order == "auto":
        order = "upper" if 2 * t > n else "lower"
    if order == "upper":
        num = sum(weights[t:])
    elif order == "lower":
        num = den - sum(weights[:t])
    else:
        raise ValueError(f"unknown summation order {order!r}")
    return Fraction(num, den)


def cdf(spec: BinomialSpec, m: int) -> Fraction:
    """Pr[X <= m], summed upward from zero."""
    if m < 0:
        return Fraction(0)
    weights, den = _weights(spec)
    return Fraction(sum(weights[: m + 1]), den)


def upper_tails(spec: BinomialSpec) -> list[Fraction]:
    """``[Pr[X >= t] for t in 0..n+1]`` in one backward pass."""
    weights, den = _weights(spec)
    out = [Fraction(0)] * (spec.n + 2)
    acc = 0
    for t in range(spec.n, -1, -1):
        acc += weights[t]
        out[t] = Fraction(acc, den)
    return out


def prob_exceeds_mean(spec: BinomialSpec) -> Fraction:
    """Pr[X > np]; X > np holds exactly when X >= floor(np) + 1."""
    return tail_ge(spec, spec.floor_mean + 1)


def prob_at_least_mean(spec: BinomialSpec) -> Fraction:
    """Pr[X >= np] = Pr[X >= ceil(np)]."""
    return tail_ge(spec, spec.ceil_mean)


def prob_exceeds_mean_plus_one(spec: BinomialSpec) -> Fraction:
    return tail_ge(spec, spec.floor_mean + 2)


def median_info(spec: BinomialSpec) -> tuple[int, bool]:
    """Smallest median and whether it is the only one.

    The smallest median is the least m with Pr[X <= m] >= 1/2.  It is unique
    iff that inequality is strict; at equality every point of [m, m+1] is a
    median.
    """
    weights, den = _weights(spec)
    acc = 0
    for m, w in enumerate(weights):
        acc += w
        if 2 * acc >= den:
            return m, 2 * acc > den
    raise AssertionError("masses do not sum to one")  # pragma: no cover


def median(spec: BinomialSpec) -> int:
    return median_info(spec)[0]


def mode(spec: BinomialSpec) -> int:
    """Smallest index of maximal mass."""
    weights, _ = _weights(spec)
    return max(range(len(weights)), key=lambda i: (weights[i], -i))


class Domination(str, enum.Enum):
    STRICT = "strict"
    EQUAL = "equal"
    VIOLATED = "violated"


def check_domination(n: int, p, q, t: int) -> Domination:
    """Classify Pr[Bin(n,p) >= t] against Pr[Bin(n,q) >= t] for p < q."""
    p, q = parse_probability(p), parse_probability(q)
    if p >= q:
        raise DomainError(f"need p < q, got p={p}, q={q}")
    if not 0 <= t <= n:
        raise DomainError(f"t={t} outside [0..{n}]")
    lower = tail_ge(BinomialSpec(n, p), t)
    upper = tail_ge(BinomialSpec(n, q), t)
    if lower < upper:
        return Domination.STRICT
    if lower == upper:
        return Domination.EQUAL
    return Domination.VIOLATED

