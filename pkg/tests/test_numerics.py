from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from conftest import unit_rationals
from isingocc.numerics import (
    DomainError,
    Interval,
    IntervalDivisionError,
    critical_B,
    format_decimal,
    interval_sqrt,
    lambda_c,
    lambda_c_float,
    parse_rational,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=50)


@st.composite
def intervals(draw):
    a, b = draw(small), draw(small)
    return Interval(min(a, b), max(a, b))


@st.composite
def interval_with_point(draw):
    iv = draw(intervals())
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=20))
    return iv, iv.lo + t * iv.width


def test_parse_rational_forms():
    assert parse_rational("3/7") == Fraction(3, 7)
    assert parse_rational("0.3128") == Fraction(3128, 10000)
    assert parse_rational("-4") == -4
    assert parse_rational("1e-3") == Fraction(1, 1000)
    for bad in ["", "abc", "1/0", "nan", "inf"]:
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_format_decimal_rounds_half_even():
    assert format_decimal(Fraction(1, 8), 2) == "0.12"
    assert format_decimal(Fraction(3, 8), 2) == "0.38"
    assert format_decimal(Fraction(-2, 3), 3) == "-0.667"


@given(interval_with_point(), interval_with_point())
def test_interval_arithmetic_contains_point_results(a, b):
    (x, px), (y, py) = a, b
    assert (x + y).contains(px + py)
    assert (x - y).contains(px - py)
    assert (x * y).contains(px * py)
    assert (x**3).contains(px**3)
    assert (x**2).contains(px**2) and (x**2).lo >= 0
    if not y.contains_zero():
        assert (x / y).contains(px / py)


def test_interval_division_by_zero_interval():
    with pytest.raises(IntervalDivisionError):
        Interval(1, 2) / Interval(-1, 1)


@given(st.fractions(min_value=0, max_value=10, max_denominator=100), st.integers(3, 40))
def test_interval_sqrt_encloses_and_nests(x, bits):
    eps = Fraction(1, 2**bits)
    enc = interval_sqrt(x, eps)
    assert enc.lo >= 0 and enc.lo**2 <= x <= enc.hi**2
    assert enc.width <= eps
    assert enc.contains(interval_sqrt(x, eps / 8))


def test_interval_sqrt_of_perfect_square_is_exact():
    assert interval_sqrt(Fraction(9, 16)) == Interval(Fraction(3, 4))


def tree_recursion_lambda_c(delta: int, B: Fraction, dps: int = 60):
    """Independent oracle: the field at which the tree map has a fixed point of slope -1.

    With ``f(x) = lam ((B x + 1)/(x + B))^(d - 1)`` the conditions ``f(x) = x`` and
    ``x f'(x) = -f(x)`` reduce to ``B x^2 + (B^2 + 1 - (d - 1)(1 - B^2)) x + B = 0``.
    The two roots are reciprocal; the smaller field value is the critical one.
    """
    with mpmath.workdps(dps):
        b = mpmath.mpf(B.numerator) / B.denominator
        c = b * b + 1 - (delta - 1) * (1 - b * b)
        disc = mpmath.sqrt(c * c - 4 * b * b)
        lams = []
        for x in ((-c - disc) / (2 * b), (-c + disc) / (2 * b)):
            lam = x / ((b * x + 1) / (x + b)) ** (delta - 1)
            # confirm both fixed-point conditions numerically
            f = lam * ((b * x + 1) / (x + b)) ** (delta - 1)
            slope = (delta - 1) * f * (b * b - 1) / ((b * x + 1) * (x + b))
            assert abs(f - x) < mpmath.mpf(10) ** (-dps + 10)
            assert abs(slope + 1) < mpmath.mpf(10) ** (-dps + 10)
            lams.append(lam)
        return min(lams)


@pytest.mark.parametrize("delta", [3, 4, 5, 7])
@pytest.mark.parametrize("frac", [Fraction(1, 100), Fraction(1, 7), Fraction(3, 8), Fraction(99, 100)])
def test_lambda_c_matches_tree_recursion_oracle(delta, frac):
    B = critical_B(delta) * frac
    enc = lambda_c(delta, B, Fraction(1, 10**12))
    oracle = tree_recursion_lambda_c(delta, B)
    assert enc.width <= Fraction(1, 10**12)
    assert mpmath.mpf(enc.lo.numerator) / enc.lo.denominator <= oracle
    assert oracle <= mpmath.mpf(enc.hi.numerator) / enc.hi.denominator
    assert abs(lambda_c_float(delta, B) - oracle) < mpmath.mpf(10) ** -40


@given(unit_rationals(200), st.integers(3, 6))
def test_lambda_c_enclosures_nest_and_stay_in_unit_interval(frac, delta):
    B = critical_B(delta) * frac
    coarse = lambda_c(delta, B, Fraction(1, 10**6))
    fine = lambda_c(delta, B, Fraction(1, 10**12))
    assert coarse.contains(fine)
    assert 0 <= coarse.lo and coarse.hi <= 1


def test_lambda_c_increases_in_B():
    prev = None
    for i in range(1, 33):
        enc = lambda_c(3, Fraction(i, 100))
        if prev is not None:
            assert prev.hi < enc.lo
        prev = enc


def test_lambda_c_domain():
    assert lambda_c(3, Fraction(1, 3)) == Interval(1)
    for args in [(3, Fraction(1, 2)), (3, Fraction(0)), (2, Fraction(1, 10))]:
        with pytest.raises(DomainError):
            lambda_c(*args)
    with pytest.raises(DomainError):
        lambda_c(3, Fraction(1, 10), Fraction(0))
