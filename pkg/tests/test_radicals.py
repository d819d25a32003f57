from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paratile.radicals import SqrtSum, canonical_sqrt, split_square

small_pos = st.integers(min_value=1, max_value=5000)
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
pos_rationals = st.fractions(min_value=Fraction(1, 30), max_value=50,
                             max_denominator=30)


@given(small_pos)
def test_split_square_factorization(n):
    s, f = split_square(n)
    assert s * s * f == n
    # f squarefree: no prime square divides it
    for p in range(2, 71):
        assert f % (p * p) != 0


@given(pos_rationals)
def test_canonical_sqrt_squares_back(x):
    c, r = canonical_sqrt(x)
    assert c * c * r == x
    s, f = split_square(r)
    assert s == 1 and f == r


def test_sqrtsum_normal_form():
    assert SqrtSum.sqrt(8) == SqrtSum.from_rational(2) * SqrtSum.sqrt(2)
    assert SqrtSum.sqrt(4) == SqrtSum.from_rational(2)
    assert SqrtSum.sqrt(Fraction(1, 2)) * SqrtSum.sqrt(2) \
        == SqrtSum.from_rational(1)


def test_known_square():
    x = SqrtSum.sqrt(2) + SqrtSum.sqrt(3)
    sq = x.square()
    assert sq == SqrtSum.from_rational(5) + SqrtSum.from_rational(2) * SqrtSum.sqrt(6)


def test_sign_decides_order():
    assert (SqrtSum.sqrt(2) - SqrtSum.from_rational(1)).sign() == 1
    assert (SqrtSum.from_rational(1) - SqrtSum.sqrt(2)).sign() == -1
    assert SqrtSum.zero().sign() == 0
    # 1 + sqrt(2) vs sqrt(3) + sqrt(5): 2.414... vs 3.968...
    a = SqrtSum.from_rational(1) + SqrtSum.sqrt(2)
    b = SqrtSum.sqrt(3) + SqrtSum.sqrt(5)
    assert (a - b).sign() == -1
    assert a <= b


def test_rational_detection():
    x = SqrtSum.sqrt(2) * SqrtSum.sqrt(2)
    assert x.is_rational()
    assert x.rational_value() == 2
    with pytest.raises(ValueError):
        SqrtSum.sqrt(2).rational_value()


@given(rationals, rationals)
def test_rational_embedding_is_faithful(a, b):
    sa, sb = SqrtSum.from_rational(a), SqrtSum.from_rational(b)
    assert (sa + sb).rational_value() == a + b
    assert (sa * sb).rational_value() == a * b


@given(st.lists(st.tuples(rationals, st.integers(min_value=1, max_value=30)),
                min_size=1, max_size=4))
def test_add_then_subtract_is_identity(terms):
    x = SqrtSum.zero()
    for c, r in terms:
        x = x + SqrtSum.from_rational(c) * SqrtSum.sqrt(r)
    y = SqrtSum.sqrt(7) + SqrtSum.from_rational(Fraction(3, 2))
    assert (x + y) - y == x


@given(st.integers(min_value=1, max_value=20),
       st.integers(min_value=1, max_value=20),
       st.integers(min_value=1, max_value=20))
def test_mul_associative(a, b, c):
    xs = [SqrtSum.sqrt(a), SqrtSum.sqrt(b) + SqrtSum.from_rational(1),
          SqrtSum.sqrt(c) - SqrtSum.from_rational(2)]
    assert (xs[0] * xs[1]) * xs[2] == xs[0] * (xs[1] * xs[2])


def test_interval_brackets_value():
    x = SqrtSum.from_rational(6) * SqrtSum.sqrt(2)
    iv = x.interval(64)
    # 6*sqrt(2) = 8.485281374238570...
    assert iv.lo < Fraction(8485281374238571, 10 ** 15) < iv.hi or \
        iv.lo > Fraction(848528137423857, 10 ** 14)
    assert iv.lo ** 2 <= 72 <= iv.hi ** 2


def test_interval_with_width_obeys_request():
    x = SqrtSum.sqrt(2) + SqrtSum.sqrt(3) + SqrtSum.sqrt(5)
    for exp in (6, 12, 20):
        w = Fraction(1, 10 ** exp)
        iv = x.interval_with_width(w)
        assert iv.width <= w


def test_str_is_readable():
    assert str(SqrtSum.from_rational(6) * SqrtSum.sqrt(2)) == "6*sqrt(2)"
    assert str(SqrtSum.zero()) == "0"
