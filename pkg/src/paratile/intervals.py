"""Exact rational intervals and certified enclosures of irrational values.

Endpoints are ``fractions.Fraction``, so ring operations on intervals are
exact and no rounding-direction bookkeeping is needed.  Irrational values
(square roots, k-th roots, exp, log, pi) enter only through enclosure
constructors that take an explicit precision in bits.  Root enclosures are
built from integer roots; exp/log/pi go through mpmath's directed-rounding
interval arithmetic, whose binary endpoints convert to Fraction losslessly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

import mpmath

Rat = Union[int, Fraction]

PREC_LADDER = (64, 128, 256, 512, 1024, 2048, 4096)


class PrecisionExhausted(Exception):
    """An enclosure could not be refined enough to decide a question."""


def iroot_floor(n: int, k: int) -> int:
    """Largest r >= 0 with r**k <= n, for n >= 0, k >= 1."""
    if n < 0:
        raise ValueError("negative radicand")
    if k == 1 or n in (0, 1):
        return n
    if k == 2:
        return math.isqrt(n)
    # Newton iteration on integers; the initial guess overshoots.
    r = 1 << (n.bit_length() // k + 1)
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _as_fraction(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: Rat) -> "Interval":
        f = _as_fraction(x)
        return Interval(f, f)

    @staticmethod
    def hull(items: Iterable["Interval"]) -> "Interval":
        items = list(items)
        return Interval(min(i.lo for i in items), max(i.hi for i in items))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Rat) -> bool:
        f = _as_fraction(x)
        return self.lo <= f <= self.hi

    def __add__(self, other):
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        prods = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return Interval(min(prods), max(prods))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def certainly_le(self, other) -> bool:
        return self.hi <= _coerce(other).lo

    def certainly_lt(self, other) -> bool:
        return self.hi < _coerce(other).lo

    def certainly_ge(self, other) -> bool:
        return self.lo >= _coerce(other).hi

    def certainly_gt(self, other) -> bool:
        return self.lo > _coerce(other).hi

    def overlaps(self, other) -> bool:
        other = _coerce(other)
        return self.lo <= other.hi and other.lo <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


def sqrt_interval(x: Rat, bits: int = 64) -> Interval:
    """Enclosure of sqrt(x) for x >= 0; exact (a point) when x is a perfect square."""
    f = _as_fraction(x)
    if f < 0:
        raise ValueError("negative radicand")
    if f == 0:
        return Interval.point(0)
    p, q = f.numerator, f.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Interval.point(Fraction(rp, rq))
    # sqrt(p/q) = sqrt(p*q)/q; floor-scaled integer sqrt gives both endpoints.
    n = p * q
    t = math.isqrt(n << (2 * bits))
    scale = q << bits
    return Interval(Fraction(t, scale), Fraction(t + 1, scale))


def root_interval(x: Rat, k: int, bits: int = 64) -> Interval:
    """Enclosure of x**(1/k) for x >= 0, integer k >= 1."""
    f = _as_fraction(x)
    if f < 0:
        raise ValueError("negative radicand")
    if k == 1:
        return Interval.point(f)
    if f == 0:
        return Interval.point(0)
    p, q = f.numerator, f.denominator
    rp, rq = iroot_floor(p, k), iroot_floor(q, k)
    if rp ** k == p and rq ** k == q:
        return Interval.point(Fraction(rp, rq))
    n = p * q ** (k - 1)  # x = n / q**k
    t = iroot_floor(n << (k * bits), k)
    scale = q << bits
    return Interval(Fraction(t, scale), Fraction(t + 1, scale))


def sqrt_upper(x: Rat, bits: int = 64) -> Fraction:
    return sqrt_interval(x, bits).hi


def sqrt_lower(x: Rat, bits: int = 64) -> Fraction:
    return sqrt_interval(x, bits).lo


# --- mpmath bridge -----------------------------------------------------------

def _mpf_tuple_to_fraction(t) -> Fraction:
    sign, man, exp, _bc = t
    man = int(man)
    if man == 0:
        if exp != 0:
            raise OverflowError("non-finite mpmath value")
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** int(exp)
    return -v if sign else v


def _from_iv(y) -> Interval:
    lo_t, hi_t = y._mpi_
    return Interval(_mpf_tuple_to_fraction(lo_t), _mpf_tuple_to_fraction(hi_t))


def _to_iv(x: Interval):
    iv = mpmath.iv
    lo = iv.mpf(x.lo.numerator) / iv.mpf(x.lo.denominator)
    hi = iv.mpf(x.hi.numerator) / iv.mpf(x.hi.denominator)
    return iv.mpf([lo.a, hi.b])


def _with_iv_prec(prec: int, fn):
    iv = mpmath.iv
    old = iv.prec
    iv.prec = prec
    try:
        return fn(iv)
    finally:
        iv.prec = old


def exp_interval(x, prec: int = 64) -> Interval:
    xi = _coerce(x)
    return _with_iv_prec(prec, lambda iv: _from_iv(iv.exp(_to_iv(xi))))


def log_interval(x, prec: int = 64) -> Interval:
    xi = _coerce(x)
    if xi.lo <= 0:
        raise ValueError("log needs a positive interval")
    return _with_iv_prec(prec, lambda iv: _from_iv(iv.log(_to_iv(xi))))


def pi_interval(prec: int = 64) -> Interval:
    return _with_iv_prec(prec, lambda iv: _from_iv(iv.pi))


def e_interval(prec: int = 64) -> Interval:
    return _with_iv_prec(prec, lambda iv: _from_iv(iv.exp(iv.mpf(1))))


def refine(compute: Callable[[int], Interval],
           decided: Callable[[Interval], bool],
           ladder: Iterable[int] = PREC_LADDER,
           what: str = "enclosure") -> Interval:
    """Evaluate ``compute(prec)`` along a precision ladder until ``decided``."""
    last = None
    for prec in ladder:
        last = compute(prec)
        if decided(last):
            return last
    raise PrecisionExhausted(f"{what}: undecided at {last}")
