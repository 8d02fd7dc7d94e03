"""Lower bounds on the probability that a binomial exceeds its mean.

Every bound returns a :class:`BoundValue`.  Bounds are evaluated even when
their hypotheses fail (``valid=False``) as long as the formula is defined,
so figure data can trace a formula across the whole p-range.  Each value
is tagged with the event it bounds, because the literature mixes
``X >= E[X]`` and ``X > E[X]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .enclosure import DEFAULT_PRECISION, Enclosure, refine
from .errors import DomainError
from .estimates import pmf_upper_bound
from .exact import BinomialSpec, parse_probability, prob_at_least_mean, prob_exceeds_mean, tail_ge
from .report import Verdict


class Event(str, enum.Enum):
    GE_MEAN = "ge_mean"                      # X >= np
    GT_MEAN = "gt_mean"                      # X > np
    GT_MEAN_PLUS_ONE = "gt_mean_plus_one"    # X > np + 1
    GE_T = "ge_t"                            # X >= t


@dataclass(frozen=True)
class BoundValue:
    bound_id: str
    value: Enclosure
    valid: bool
    strict: bool
    event: Event
    note: str = ""


def event_probability(event: Event, spec: BinomialSpec, t: int | None = None) -> Fraction:
    """Exact probability of ``event`` under ``spec``."""
    if event is Event.GE_MEAN:
        return prob_at_least_mean(spec)
    if event is Event.GT_MEAN:
        return prob_exceeds_mean(spec)
    if event is Event.GT_MEAN_PLUS_ONE:
        return tail_ge(spec, spec.floor_mean + 2)
    if t is None:
        raise ValueError("event ge_t needs a threshold t")
    return tail_ge(spec, t)


QUARTER = Fraction(1, 4)
PLUSONE_CONSTANT = Fraction(37, 1000)
SMALL_P_CONSTANT = Fraction(113, 10000)


def _positive_p(p) -> Fraction:
    p = parse_probability(p)
    if p <= 0:
        raise DomainError(f"p={p} must be positive")
    return p


def bound_rigollet_tong(n: int, p, bits: int = DEFAULT_PRECISION) -> BoundValue:
    p = _positive_p(p)
    value = QUARTER if p >= Fraction(1, n) else p
    return BoundValue("rt11", Enclosure.exact(value, bits), p <= Fraction(1, 2), False, Event.GE_MEAN)


def bound_greenberg_mohri(n: int, p, bits: int = DEFAULT_PRECISION) -> BoundValue:
    p = parse_probability(p)
    return BoundValue("gm14", Enclosure.exact(QUARTER, bits), p > Fraction(1, n), True, Event.GE_MEAN)


def bound_pelekis_ramon(n: int, p, bits: int = DEFAULT_PRECISION) -> BoundValue:
    """``sqrt(v) / (2 sqrt 2 (sqrt(v+1) + 1))`` with ``v = np(1-p)``."""
    p = parse_probability(p)
    v = n * p * (1 - p)
    # sqrt(v)/(2 sqrt 2) == sqrt(v/8); keeps the value exact when v/8 is a square
    num = Enclosure.exact(v / 8, bits).sqrt()
    den = Enclosure.exact(v + 1, bits).sqrt() + 1
    valid = Fraction(1, n) <= p <= 1 - Fraction(1, n)
    return BoundValue("pr16", num / den, valid, False, Event.GE_MEAN)


def bound_g(n: int, k: int, bits: int = DEFAULT_PRECISION) -> BoundValue:
    if not 1 <= k <= n - 1:
        raise DomainError(f"k={k} outside [1..{n - 1}]")
    value = Fraction(1, 2) - pmf_upper_bound(n, k, bits)
    return BoundValue("doerr-g", value, True, True, Event.GT_MEAN)


def log_four_thirds(bits: int = DEFAULT_PRECISION) -> Enclosure:
    return Enclosure.exact(mpq(4, 3), bits).log()


def quarter_threshold_met(n: int, p, bits: int = DEFAULT_PRECISION) -> bool:
    """Whether ``n p >= ln(4/3)``.  ln(4/3) is irrational, so this always decides."""
    pn = n * parse_probability(p)
    if pn <= 0:
        return False
    answer, _, _ = refine(log_four_thirds, lambda e: e.compare(pn), bits)
    return answer < 0


def bound_quarter(n: int, p, bits: int = DEFAULT_PRECISION) -> BoundValue:
    p = parse_probability(p)
    valid = p < 1 and quarter_threshold_met(n, p, bits)
    note = ""
    if n == 2 and p == Fraction(1, 2):
        note = "equality: Pr[X > E[X]] = 1/4 exactly"
    elif valid:
        note = "strict inequality holds here"
    return BoundValue("quarter", Enclosure.exact(QUARTER, bits), valid, False, Event.GT_MEAN, note)


def bound_small_p(n: int, p, bits: int = DEFAULT_PRECISION) -> BoundValue:
    p = parse_probability(p)
    if not 0 < p < 1:
        raise DomainError(f"p={p} outside (0, 1)")
    if p < Fraction(1, n):
        value = 1 - Enclosure.exact(-n * p, bits).exp()
        return BoundValue("small-p", value, True, True, Event.GT_MEAN)
    if n == 2:
        # Pr[X=2] = p^2 >= 1/4 with equality at p = 1/2
        return BoundValue("small-p", Enclosure.exact(QUARTER, bits), True, False, Event.GT_MEAN,
                          "n=2 branch: Pr[X > E[X]] >= p^2 >= 1/4")
    return BoundValue("small-p", Enclosure.exact(SMALL_P_CONSTANT, bits), True, True, Event.GT_MEAN)


def h_value(n: int, k: int, bits: int = DEFAULT_PRECISION) -> Enclosure:
    """``1/4 - sqrt(n/(2 pi (k+1)(n-k-1))) (1 - 1/(k+1))^(k+1) (1 + 1/(n-k-1))^(n-k-1)``."""
    if n < 3 or not 1 <= k <= n - 2:
        raise DomainError(f"(n, k)=({n}, {k}) outside n >= 3, 1 <= k <= n-2")
    m = n - k - 1
    factor = mpq(k, k + 1) ** (k + 1) * mpq(m + 1, m) ** m
    return QUARTER - pmf_upper_bound(n, k + 1, bits) * factor


def bound_plusone(n: int, k: int, variant: str, bits: int = DEFAULT_PRECISION) -> BoundValue:
    if n < 3 or not 1 <= k <= n - 2:
        raise DomainError(f"(n, k)=({n}, {k}) outside n >= 3, 1 <= k <= n-2")
    if variant == "a":
        value = Fraction(1, 2) - 2 * pmf_upper_bound(n, k, bits)
    elif variant == "b":
        value = h_value(n, k, bits)
    elif variant == "c":
        value = Enclosure.exact(PLUSONE_CONSTANT, bits)
    else:
        raise DomainError(f"unknown variant {variant!r}; expected a, b or c")
    return BoundValue(f"plusone-{variant}", value, True, False, Event.GT_MEAN_PLUS_ONE)


def bound_plusone_small_p(n: int, alpha, bits: int = DEFAULT_PRECISION) -> BoundValue:
    """``1 - e^-alpha - alpha e^(-alpha (n-1)/n)`` for ``p = alpha/n``."""
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha={alpha} outside (0, 1)")
    a = Enclosure.exact(alpha, bits)
    value = 1 - (-a).exp() - a * (-a * Fraction(n - 1, n)).exp()
    return BoundValue("plusone-small-p", value, True, False, Event.GT_MEAN_PLUS_ONE)


def pelekis_ell(n: int, p: Fraction, t: int) -> int:
    return math.floor((t - n * p) / (1 - p))


def bound_pelekis_k(n: int, p, t: int, bits: int = DEFAULT_PRECISION) -> BoundValue:
    """``p^(2l+2)/2 * C(n, l+1)/C(t, l+1)`` with ``l = floor((t-np)/(1-p))``."""
    p = parse_probability(p)
    if not 0 < p < 1:
        raise DomainError(f"p={p} outside (0, 1)")
    if not (n * p < t <= n - 1):
        raise DomainError(f"t={t} outside np < t <= n-1 (np={n * p})")
    ell = pelekis_ell(n, p, t)
    value = p ** (2 * ell + 2) / 2 * Fraction(math.comb(n, ell + 1), math.comb(t, ell + 1))
    return BoundValue("pelekis-k", Enclosure.exact(value, bits), True, False, Event.GE_T)


def rigollet_shift_check(n: int, k: int) -> Verdict:
    """Compare Pr[Bin(n, k/n) >= k+1] with Pr[Bin(n, (k-1)/n) >= k]."""
    if not 2 <= k <= n - 1:
        raise DomainError(f"k={k} outside [2..{n - 1}]")
    left = tail_ge(BinomialSpec(n, Fraction(k, n)), k + 1)
    right = tail_ge(BinomialSpec(n, Fraction(k - 1, n)), k)
    return Verdict.HOLDS if left >= right else Verdict.VIOLATED


BOUND_IDS = (
    "rt11", "gm14", "pr16", "doerr-g", "quarter", "small-p",
    "plusone-a", "plusone-b", "plusone-c", "plusone-small-p", "pelekis-k",
)


def _need(name: str, value):
    if value is None:
        raise DomainError(f"missing parameter --{name}")
    return value


def _k_from(n: int, k, p, upper: int) -> int:
    if k is None:
        spec = BinomialSpec(n, _need("p or --k", p))
        k = spec.floor_mean
    if not 1 <= k <= upper:
        raise DomainError(f"k={k} outside [1..{upper}]")
    return k


def evaluate_bound(bound_id: str, n: int, *, p=None, k=None, t=None, alpha=None,
                   variant=None, bits: int = DEFAULT_PRECISION) -> BoundValue:
    """Dispatch by stable bound identifier (see ``BOUND_IDS``)."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if bound_id == "rt11":
        return bound_rigollet_tong(n, _need("p", p), bits)
    if bound_id == "gm14":
        return bound_greenberg_mohri(n, _need("p", p), bits)
    if bound_id == "pr16":
        return bound_pelekis_ramon(n, _need("p", p), bits)
    if bound_id == "doerr-g":
        return bound_g(n, _k_from(n, k, p, n - 1), bits)
    if bound_id == "quarter":
        return bound_quarter(n, _need("p", p), bits)
    if bound_id == "small-p":
        return bound_small_p(n, _need("p", p), bits)
    if bound_id.startswith("plusone-") and bound_id[-1] in "abc" and len(bound_id) == 9:
        if variant is not None and variant != bound_id[-1]:
            raise DomainError(f"--variant {variant} conflicts with {bound_id}")
        return bound_plusone(n, _k_from(n, k, p, n - 2), bound_id[-1], bits)
    if bound_id == "plusone-small-p":
        if alpha is None:
            alpha = n * parse_probability(_need("p or --alpha", p))
        return bound_plusone_small_p(n, alpha, bits)
    if bound_id == "pelekis-k":
        return bound_pelekis_k(n, _need("p", p), _need("t", t), bits)
    raise KeyError(bound_id)
