from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from wachfam.padic import (PadicScalar, PrecisionError, PrecisionProfile, binomial,
                           valuation, vp_factorial)

primes = st.sampled_from([3, 5, 7])


def test_from_int_normalises_unit():
    a = PadicScalar.from_int(18, 3)
    assert (a.unit, a.valuation, a.prec) == (2, 2, None)


def test_string_format_and_parse_roundtrip():
    a = PadicScalar(5, 7, 2, 9)
    assert str(a) == "7*5^2 (mod 5^9)"
    assert PadicScalar.parse(str(a), 5) == a
    assert PadicScalar.parse("7*p^2 (mod p^9)", 5).prec == 9


def test_zero_strings():
    assert str(PadicScalar.zero(3)) == "0"
    assert str(PadicScalar.zero(3, 4)) == "0 (mod 3^4)"
    assert PadicScalar.parse("0 (mod 3^4)", 3).prec == 4


def test_parse_rejects_wrong_base():
    with pytest.raises(ValueError):
        PadicScalar.parse("1*5^2", 3)
    with pytest.raises(ValueError):
        PadicScalar.parse("two", 3)


@pytest.mark.parametrize("p", [2, 4, 1, 9])
def test_profile_rejects_bad_primes(p):
    with pytest.raises(ValueError):
        PrecisionProfile(p, 5, 5)


def test_profile_rejects_bad_caps():
    with pytest.raises(ValueError):
        PrecisionProfile(3, 0, 5)
    with pytest.raises(ValueError):
        PrecisionProfile(3, 5, 5, cap_X=0)


def test_working_precision_covers_growth():
    # cap_p + ceil(59/2) + guard
    assert PrecisionProfile(3, 12, 60, 5).work == 12 + 30 + 6
    assert PrecisionProfile(7, 12, 60, 5).work == 12 + 10 + 6


def test_profile_json_roundtrip():
    pr = PrecisionProfile(5, 9, 30, 4, guard=3)
    assert PrecisionProfile.from_json(pr.to_json()) == pr


def test_division_by_zeros():
    one = PadicScalar.from_int(1, 3)
    with pytest.raises(ZeroDivisionError):
        one / PadicScalar.zero(3)
    with pytest.raises(PrecisionError):
        one / PadicScalar.zero(3, 5)


def test_non_dyadic_rational_needs_precision():
    with pytest.raises(PrecisionError):
        PadicScalar.from_rational(Fraction(1, 2), 3)
    half = PadicScalar.from_rational(Fraction(1, 2), 3, prec=6)
    assert (half * 2) == 1
    assert (half * 2 - 1).prec == 6


def test_valuation_of_exact_zero_is_infinite():
    assert valuation(PadicScalar.zero(5)) == float("inf")
    assert valuation(PadicScalar.from_int(50, 5)) == 2


ints = st.integers(min_value=-10**6, max_value=10**6)


@given(primes, ints, ints, st.integers(1, 12), st.integers(1, 12))
def test_ring_operations_match_integers(p, x, y, ex, ey):
    a = PadicScalar.from_int(x, p, ex)
    b = PadicScalar.from_int(y, p, ey)
    for got, want in ((a + b, x + y), (a - b, x - y), (a * b, x * y)):
        assert got == PadicScalar.from_int(want, p)


@given(primes, ints, ints, st.integers(1, 12))
def test_product_precision_is_sound(p, x, y, e):
    """Changing an operand inside its precision never changes the product at the claimed precision."""
    a = PadicScalar.from_int(x, p, e)
    b = PadicScalar.from_int(y, p)
    a2 = PadicScalar.from_int(x + p**e * 17, p, e)
    prod, prod2 = a * b, a2 * b
    assert prod.prec == prod2.prec
    exact = PadicScalar.from_int((x + p**e * 17) * y, p)
    assert prod == exact


@given(primes, ints.filter(lambda n: n != 0), ints.filter(lambda n: n != 0))
def test_exact_division_matches_fraction(p, x, y):
    a, b = PadicScalar.from_int(x, p), PadicScalar.from_int(y, p, 30)
    q = a / b
    assert q == PadicScalar.from_rational(Fraction(x, y), p, prec=q.prec)


@given(primes, st.integers(0, 40), st.integers(0, 12))
def test_binomial_matches_comb(p, a, i):
    assert binomial(a, i, p) == comb(a, i)


@given(primes, st.integers(0, 12))
def test_binomial_of_minus_one(p, i):
    assert binomial(-1, i, p) == (-1) ** i


def test_inexact_binomial_loses_factorial_digits():
    a = PadicScalar.from_int(4, 3, 10)
    assert binomial(a, 6).prec == 10 - vp_factorial(6, 3)
