"""Exact rationals, rigorous rational-endpoint intervals, and the critical field.

Rationals are plain :class:`fractions.Fraction` values.  :class:`Interval`
keeps exact rational endpoints, so every operation except :func:`interval_sqrt`
is exact; the square root rounds outward onto a dyadic grid.
"""

from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Union

__all__ = [
    "Interval",
    "IntervalDivisionError",
    "DomainError",
    "Scalar",
    "as_fraction",
    "parse_rational",
    "format_rational",
    "format_decimal",
    "interval_sqrt",
    "lambda_c",
    "lambda_c_float",
    "critical_B",
]


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class IntervalDivisionError(ZeroDivisionError):
    """Division by an interval that contains zero."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal like ``"0.3128"`` exactly."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        if any(c in s for c in ".eE"):
            d = Decimal(s)
            if not d.is_finite():
                raise ValueError(f"not a finite decimal: {text!r}")
            return Fraction(d)
        return Fraction(int(s))
    except (InvalidOperation, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction, digits: int) -> str:
    """Round-half-even decimal rendering for display only."""
    x = Fraction(x)
    q = Fraction(1, 10**digits)
    scaled = round(x / q)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


class Interval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = as_fraction(lo)
        hi = lo if hi is None else as_fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    def __reduce__(self):
        return (Interval, (self.lo, self.hi))

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    @staticmethod
    def _coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval(as_fraction(x))

    def __eq__(self, other):
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo!s}, {self.hi!s})"

    def __str__(self):
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return Interval(self.lo + other, self.hi + other)
        if not isinstance(other, Interval):
            return NotImplemented
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Interval(self.lo - other, self.hi - other)
        if not isinstance(other, Interval):
            return NotImplemented
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other >= 0:
                return Interval(self.lo * other, self.hi * other)
            return Interval(self.hi * other, self.lo * other)
        if not isinstance(other, Interval):
            return NotImplemented
        if self.lo >= 0 and other.lo >= 0:
            return Interval(self.lo * other.lo, self.hi * other.hi)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise IntervalDivisionError(f"division by interval {self} containing 0")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, Interval):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        if k == 0:
            return Interval(1)
        if self.lo >= 0:
            return Interval(self.lo**k, self.hi**k)
        if self.hi <= 0:
            a, b = self.hi**k, self.lo**k
            return Interval(a, b) if k % 2 == 0 else Interval(-abs(b), -abs(a))
        if k % 2 == 1:
            return Interval(self.lo**k, self.hi**k)
        return Interval(0, max(self.lo**k, self.hi**k))


Scalar = Union[Fraction, Interval]


def _sqrt_floor_dyadic(x: Fraction, k: int) -> int:
    # floor(sqrt(x) * 2^k) == isqrt(floor(x * 4^k))
    return math.isqrt((x.numerator << (2 * k)) // x.denominator)


def _sqrt_ceil_dyadic(x: Fraction, k: int) -> int:
    f = _sqrt_floor_dyadic(x, k)
    if f * f * x.denominator == x.numerator << (2 * k):
        return f
    return f + 1


def _bits_for(eps: Fraction) -> int:
    """Smallest k with 2^-k <= eps/2."""
    k = 0
    while Fraction(1, 1 << k) > eps / 2:
        k += 1
    return k


def interval_sqrt(x, eps=Fraction(1, 10**9)) -> Interval:
    """Outward-rounded square root on the dyadic grid of spacing ``<= eps/2``.

    Enclosures for the same input are nested as ``eps`` shrinks because the
    dyadic floors and ceilings only move inward on finer grids.
    """
    x = Interval._coerce(x)
    eps = as_fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    if x.lo < 0:
        raise DomainError(f"square root of interval with negative part {x}")
    k = _bits_for(eps)
    scale = Fraction(1, 1 << k)
    lo = _sqrt_floor_dyadic(x.lo, k) * scale
    hi = _sqrt_ceil_dyadic(x.hi, k) * scale
    return Interval(lo, hi)


def critical_B(delta: int) -> Fraction:
    return Fraction(delta - 2, delta)


def _lambda_c_at(delta: int, B: Fraction, k: int) -> Interval:
    Bc = critical_B(delta)
    r = (Bc - B) / (Bc + B)
    s = (1 - B) / (1 + B)
    e = Fraction(1, 1 << k)
    # first factor is decreasing in sqrt(r/s)
    q = interval_sqrt(r / s, 2 * e)
    f1 = Interval((1 - q.hi) / (1 + q.hi), (1 - q.lo) / (1 + q.lo))
    # ((1 + p)/(1 - p))^((Bc + 1)/(Bc - 1)) = ((1 - p)/(1 + p))^(delta - 1), decreasing in p
    p = interval_sqrt(r * s, 2 * e)
    p = Interval(p.lo, min(p.hi, Fraction(1)))
    f2 = Interval((1 - p.hi) / (1 + p.hi), (1 - p.lo) / (1 + p.lo)) ** (delta - 1)
    lo = max(f1.lo * f2.lo, Fraction(0))
    hi = min(f1.hi * f2.hi, Fraction(1))
    return Interval(lo, hi)


def lambda_c(delta: int, B, eps=Fraction(1, 10**9)) -> Interval:
    """Rigorous enclosure of the critical field ``lambda_c(delta, B)`` of width ``<= eps``.

    Uses the closed form with outer exponent ``(Bc + 1)/(Bc - 1) = -(delta - 1)``,
    the value at which the tree recursion ``x -> lam((Bx + 1)/(x + B))^(delta-1)``
    has a fixed point of slope -1.  Only square roots are inexact.
    """
    B = as_fraction(B)
    eps = as_fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    if delta < 3:
        raise DomainError("delta must be at least 3")
    Bc = critical_B(delta)
    if not 0 < B <= Bc:
        raise DomainError(f"B={B} outside (0, {Bc}]")
    if B == Bc:
        return Interval(1)
    k = _bits_for(eps)
    while True:
        enc = _lambda_c_at(delta, B, k)
        if enc.width <= eps:
            return enc
        k += 1


def lambda_c_float(delta: int, B, digits: int = 50):
    """Non-rigorous high-precision evaluation of the same closed form (an :class:`mpmath.mpf`)."""
    import mpmath

    B = as_fraction(B)
    Bc = critical_B(delta)
    if delta < 3 or not 0 < B <= Bc:
        raise DomainError(f"B={B} outside (0, {Bc}] or delta < 3")
    with mpmath.workdps(digits):
        b = mpmath.mpf(B.numerator) / B.denominator
        bc = mpmath.mpf(Bc.numerator) / Bc.denominator
        r = (bc - b) / (bc + b)
        s = (1 - b) / (1 + b)
        q = mpmath.sqrt(r / s)
        p = mpmath.sqrt(r * s)
        return +((1 - q) / (1 + q) * ((1 + p) / (1 - p)) ** ((bc + 1) / (bc - 1)))
