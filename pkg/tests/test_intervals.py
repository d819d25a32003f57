import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paratile.intervals import (Interval, PrecisionExhausted, e_interval,
                                exp_interval, iroot_floor, log_interval,
                                pi_interval, refine, root_interval,
                                sqrt_interval, sqrt_lower, sqrt_upper)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)
positive = st.fractions(min_value=Fraction(1, 50), max_value=100,
                        max_denominator=50)


@given(st.integers(min_value=0, max_value=10 ** 18),
       st.integers(min_value=1, max_value=6))
def test_iroot_floor_is_floor(n, k):
    r = iroot_floor(n, k)
    assert r ** k <= n < (r + 1) ** k


def test_iroot_floor_exact_powers():
    assert iroot_floor(27, 3) == 3
    assert iroot_floor(26, 3) == 2
    assert iroot_floor(1 << 60, 2) == 1 << 30


@given(rationals, rationals, rationals)
def test_interval_add_mul_contain(a, b, c):
    # degenerate operands: containment must survive arithmetic
    x = Interval.point(a)
    y = Interval(min(b, c), max(b, c))
    assert (x + y).contains(a + b)
    assert (x * y).contains(a * c)
    assert (x - y).contains(a - b)
    assert (-y).contains(-c)


@given(positive)
def test_sqrt_interval_brackets(x):
    iv = sqrt_interval(x, bits=32)
    assert iv.lo >= 0
    assert iv.lo * iv.lo <= x <= iv.hi * iv.hi
    tighter = sqrt_interval(x, bits=64)
    assert iv.lo <= tighter.lo and tighter.hi <= iv.hi


@given(positive)
def test_sqrt_bounds_order(x):
    assert sqrt_lower(x) <= sqrt_upper(x)
    assert sqrt_lower(x) ** 2 <= x <= sqrt_upper(x) ** 2


@given(positive, st.integers(min_value=2, max_value=5))
def test_root_interval_brackets(x, k):
    iv = root_interval(x, k, bits=48)
    assert iv.lo ** k <= x <= iv.hi ** k


def test_interval_reciprocal():
    iv = Interval(Fraction(2), Fraction(4))
    rec = iv.reciprocal()
    assert rec.contains(Fraction(1, 3))
    with pytest.raises(ZeroDivisionError):
        Interval(Fraction(-1), Fraction(1)).reciprocal()


def test_comparison_predicates():
    a = Interval(Fraction(0), Fraction(1))
    b = Interval(Fraction(2), Fraction(3))
    assert a.certainly_lt(b)
    assert b.certainly_gt(a)
    assert not a.overlaps(b)
    assert a.overlaps(Interval(Fraction(1), Fraction(2)))


def test_exp_known_values():
    zero = exp_interval(Fraction(0))
    assert zero.contains(Fraction(1))
    e = exp_interval(Fraction(1), 96)
    # e = 2.718281828459045235360287...
    assert e.lo > Fraction(27182818284590452353, 10 ** 19)
    assert e.hi < Fraction(27182818284590452354, 10 ** 19)


def test_exp_negative_argument():
    iv = exp_interval(Fraction(-1), 64)
    prod = iv * exp_interval(Fraction(1), 64)
    assert prod.contains(Fraction(1))


def test_log_known_values():
    assert log_interval(Fraction(1)).contains(Fraction(0))
    iv = log_interval(Fraction(2), 96)
    # ln 2 = 0.6931471805599453094172...
    assert iv.lo > Fraction(6931471805599453094, 10 ** 19)
    assert iv.hi < Fraction(6931471805599453095, 10 ** 19)
    with pytest.raises(ValueError):
        log_interval(Fraction(0))


@given(positive)
def test_exp_log_roundtrip_contains(x):
    assert exp_interval(log_interval(x, 80), 80).contains(x)


def test_pi_digits():
    iv = pi_interval(80)
    # pi = 3.14159265358979323846 2643...
    assert iv.lo > Fraction(314159265358979323846, 10 ** 20)
    assert iv.hi < Fraction(314159265358979323847, 10 ** 20)
    assert iv.width < Fraction(1, 10 ** 18)


def test_e_interval_matches_exp_one():
    assert e_interval(64).overlaps(exp_interval(Fraction(1), 64))


def test_refine_converges():
    target = Fraction(1, 10 ** 30)
    iv = refine(lambda p: sqrt_interval(Fraction(2), p),
                decided=lambda r: r.width <= target)
    assert iv.width <= target
    assert iv.lo ** 2 <= 2 <= iv.hi ** 2


def test_refine_gives_up():
    with pytest.raises(PrecisionExhausted):
        refine(lambda p: Interval(Fraction(0), Fraction(1)),
               decided=lambda r: r.width <= Fraction(1, 10))
