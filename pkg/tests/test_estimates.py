import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from binomtail.errors import DomainError
from binomtail.estimates import (
    MonoKind,
    binom_coeff_enclosure,
    binomial_correction_exponents,
    binomial_correction_floor,
    mono_expr,
    pmf_upper_bound,
    robbins_correction,
    robbins_factorial_bounds,
)
from binomtail.exact import BinomialSpec, pmf


def test_robbins_n1():
    fb = robbins_factorial_bounds(1)
    assert Fraction(99587, 100000) < fb.lower.lo and fb.lower.hi < Fraction(99588, 100000)
    assert Fraction(100227, 100000) < fb.upper.lo and fb.upper.hi < Fraction(100228, 100000)
    assert fb.separates(1)
    _, upper_factor = robbins_correction(1)
    assert upper_factor.hi < Fraction(108690405, 10**8)


def test_robbins_ten():
    assert robbins_factorial_bounds(10).separates(3628800)


def as_mp(q):
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def brackets(enc, truth):
    slack = abs(truth) * mpmath.mpf(10) ** -60
    return as_mp(enc.lo) - slack <= truth <= as_mp(enc.hi) + slack


@settings(max_examples=40)
@given(st.integers(1, 300))
def test_robbins_brackets(n):
    fb = robbins_factorial_bounds(n)
    assert fb.separates(math.factorial(n))
    with mpmath.workdps(120):
        core = mpmath.sqrt(2 * mpmath.pi * n) * (n / mpmath.e) ** n
        assert brackets(fb.lower, core * mpmath.exp(mpmath.mpf(1) / (12 * n + 1)))
        assert brackets(fb.upper, core * mpmath.exp(mpmath.mpf(1) / (12 * n)))


def test_correction_floor_constant():
    enc = binomial_correction_floor()
    assert enc.lo > Fraction("0.88102729") and enc.hi < Fraction("0.88102730")
    lo_exp, _ = binomial_correction_exponents(2, 1)
    assert lo_exp == Fraction(-1, 6) + Fraction(1, 25)


@pytest.mark.parametrize("n, k", [(2, 1), (100, 50), (7, 3), (150, 1)])
def test_binom_enclosure(n, k):
    lower, upper = binom_coeff_enclosure(n, k)
    assert lower.hi < math.comb(n, k) < upper.lo


@pytest.mark.parametrize("n, k", [(1, 1), (5, 0), (5, 5)])
def test_binom_range(n, k):
    with pytest.raises(DomainError):
        binom_coeff_enclosure(n, k)
    with pytest.raises(DomainError):
        pmf_upper_bound(n, k)


@pytest.mark.parametrize(
    "n, k, lo, hi",
    [(2, 1, "0.564189", "0.564190"), (4, 2, "0.398942", "0.398943"), (20, 3, "0.249827", "0.249828")],
)
def test_pmf_upper_bound_values(n, k, lo, hi):
    enc = pmf_upper_bound(n, k)
    assert Fraction(lo) < enc.lo and enc.hi < Fraction(hi)
    assert pmf(BinomialSpec(n, Fraction(k, n)), k) < enc.lo


@given(st.integers(2, 120), st.data())
def test_pmf_bound_dominates(n, data):
    k = data.draw(st.integers(1, n - 1))
    assert pmf(BinomialSpec(n, Fraction(k, n)), k) < pmf_upper_bound(n, k).lo


def test_mono_exact_points():
    assert mono_expr(MonoKind.PAIR_SUM, 1).lo == 1
    assert mono_expr(MonoKind.PAIR_SUM, 1).is_exact
    assert mono_expr(MonoKind.PAIR_SUM, 2).lo == Fraction(3, 4)
    assert mono_expr(MonoKind.POW_INC, 2, Fraction(1, 2)).lo == Fraction(1, 4)
    assert mono_expr(MonoKind.POW_INC, 2, Fraction(1, 2)).is_exact


@pytest.mark.parametrize("kind, x", [("pow_inc", Fraction(1, 2)), ("pow_dec", 0), ("pair_sum", Fraction(9, 10))])
def test_mono_domain(kind, x):
    with pytest.raises(DomainError):
        mono_expr(kind, x)


@given(
    st.sampled_from(list(MonoKind)),
    st.fractions(min_value=1, max_value=40, max_denominator=50),
    st.fractions(min_value=Fraction(1, 50), max_value=3, max_denominator=50),
    st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)]),
)
def test_mono_direction(kind, x, dx, alpha):
    a, b = mono_expr(kind, x, alpha), mono_expr(kind, x + dx, alpha)
    if kind is MonoKind.POW_INC:
        assert a.hi <= b.lo
    else:
        assert b.hi <= a.lo


@given(st.fractions(min_value=1, max_value=30, max_denominator=40))
def test_mono_contains_truth(x):
    with mpmath.workdps(100):
        xm = as_mp(x)
        truth = (1 + 1 / xm) ** (xm + mpmath.mpf(1) / 2)
        assert brackets(mono_expr(MonoKind.POW_DEC, x), truth)
