from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from wachfam.padic import IntegralityError, PadicScalar, PrecisionError, PrecisionProfile
from wachfam.series import (FamilySeries, GammaElement, PiSeries, compose, evaluate_X,
                            frobenius, gamma_act, invert_unit, primitive_root_mod_p2,
                            reduce_mod_p, series_from_json)

N = 10


def prof(p=3, cap_pi=N, cap_X=1, cap_p=8):
    return PrecisionProfile(p, cap_p, cap_pi, cap_X)


coeff_lists = st.lists(st.integers(-500, 500), min_size=N, max_size=N)
primes = st.sampled_from([3, 5, 7])


def frac(s):
    return [s.coeff(j).to_fraction() for j in range(s.n)]


def test_phi_of_pi_is_binomial_expansion():
    pr = prof(5)
    phi = frobenius(PiSeries.pi(pr))
    assert frac(phi) == [0] + [comb(5, i) for i in range(1, 6)] + [0] * (N - 6)


def test_gamma_of_pi_first_terms():
    pr = prof(3)
    g = gamma_act(GammaElement(4, 3), PiSeries.pi(pr))
    assert frac(g)[:4] == [0, 4, 6, 4]


@given(primes, coeff_lists, coeff_lists)
def test_product_matches_oracle(p, a, b):
    pr = prof(p)
    f, g = PiSeries.from_ints(pr, a), PiSeries.from_ints(pr, b)
    assert frac(f * g) == oracle.mul(list(map(Fraction, a)), list(map(Fraction, b)))


@given(coeff_lists, coeff_lists)
def test_family_product_matches_oracle_per_x_degree(a, b):
    pr = prof(3, cap_X=2)
    f = FamilySeries.from_ints(pr, [[x, y] for x, y in zip(a, b)])
    g = FamilySeries.from_ints(pr, [[y, 0] for y in b])
    h = f * g
    fa, fb = list(map(Fraction, a)), list(map(Fraction, b))
    assert frac(h.x_part(0)) == oracle.mul(fa, fb)
    assert frac(h.x_part(1)) == oracle.mul(fb, fb)


@given(primes, coeff_lists, st.integers(2, 30))
def test_compose_matches_oracle(p, a, chi):
    if chi % p == 0:
        chi += 1
    pr = prof(p)
    f = PiSeries.from_ints(pr, a)
    got = gamma_act(GammaElement(chi, p), f)
    assert frac(got) == oracle.gamma(list(map(Fraction, a)), chi)
    assert frac(frobenius(f)) == oracle.phi(list(map(Fraction, a)), p)


@given(primes, coeff_lists)
def test_invert_unit_matches_oracle(p, a):
    a = [a[0] * p + 1] + a[1:]
    pr = prof(p)
    f = PiSeries.from_ints(pr, a)
    g = invert_unit(f)
    assert oracle.agrees(g, oracle.inv(list(map(Fraction, a))))
    assert (f * g - 1).is_zero()


def test_inverse_with_p_in_constant_term():
    pr = prof(3)
    q = PiSeries.from_ints(pr, [3, 3, 1])
    inv = invert_unit(q)
    assert inv.coeff(0) == PadicScalar.from_int(1, 3).shift(-1)
    assert oracle.agrees(inv, oracle.inv([Fraction(3), Fraction(3), Fraction(1)] + [0] * (N - 3)))


@given(primes, st.integers(2, 50), st.integers(2, 50))
def test_gamma_action_is_a_group_action(p, a, b):
    a, b = a + (a % p == 0), b + (b % p == 0)
    pr = prof(p)
    f = PiSeries.from_ints(pr, [1, 2, 3, 4, 5])
    ga, gb = GammaElement(a, p), GammaElement(b, p)
    assert gamma_act(ga, gamma_act(gb, f)) == gamma_act(ga * gb, f)


@given(primes, coeff_lists, st.integers(2, 40))
def test_phi_commutes_with_gamma(p, a, chi):
    chi += chi % p == 0
    pr = prof(p)
    f = PiSeries.from_ints(pr, a)
    g = GammaElement(chi, p)
    assert frobenius(gamma_act(g, f)) == gamma_act(g, frobenius(f))


@given(primes, coeff_lists, st.integers(1, 6), st.integers(1, 10**6))
def test_precision_tracking_is_sound(p, a, e, noise):
    """Perturbing an input inside its precision leaves outputs equal at their claimed precision."""
    pr = prof(p)
    f = PiSeries.from_ints(pr, a, prec=e)
    f2 = PiSeries.from_ints(pr, [c + noise * p**e for c in a], prec=e)
    g = PiSeries.from_ints(pr, [1, p, 2, 0, 5])
    chi = GammaElement(1 + p, p)
    for op in (lambda s: s * g, frobenius, lambda s: gamma_act(chi, s),
               lambda s: s * PiSeries.from_ints(pr, [0, 1, p]) * s):
        x, y = op(f), op(f2)
        exact = op(PiSeries.from_ints(pr, [c + noise * p**e for c in a]))
        assert (x - y).is_zero()
        assert (x - exact).is_zero()


def test_mixed_precision_rows():
    pr = prof(3)
    f = PiSeries.from_ints(pr, [1, 1], prec=np.array([np.inf, 2] + [np.inf] * (N - 2)))
    sq = f * f
    # 1 + 2 pi + pi^2 with the pi and pi^2 rows uncertain
    assert sq.coeff(0) == 1
    assert sq.prec[1] == 2 and sq.prec[2] == 2


def test_evaluate_x_matches_polynomial_and_bounds_truncation():
    pr = prof(3, cap_X=3)
    f = FamilySeries.from_ints(pr, [[1, 2, 5], [0, 1, 0]])
    a = PadicScalar.from_int(3, 3)
    v = evaluate_X(f, a)
    assert v.coeff(0) == 1 + 2 * 3 + 5 * 9
    assert v.coeff(1) == 3
    # three X-terms kept, v(alpha) = 1
    assert v.prec[0] == 3
    assert evaluate_X(f, PadicScalar.zero(3)).is_exact()


def test_evaluate_x_rejects_units():
    pr = prof(3, cap_X=2)
    with pytest.raises(ValueError):
        evaluate_X(FamilySeries.one(pr), 1)


def test_compose_needs_zero_constant_term():
    pr = prof(3)
    with pytest.raises(ValueError):
        compose(PiSeries.one(pr), PiSeries.from_ints(pr, [1, 1]))


def test_reduce_mod_p():
    pr = prof(5)
    r = reduce_mod_p(PiSeries.from_ints(pr, [7, 10, -1]))
    assert frac(r)[:3] == [2, 0, 4]
    with pytest.raises(IntegralityError):
        reduce_mod_p(PiSeries.from_ints(pr, [1]).scale(Fraction(1, 5)))


def test_ring_r_membership():
    pr = prof(3)
    q_over_p = PiSeries.from_ints(pr, [3, 3, 1]).scale(Fraction(1, 3))
    assert q_over_p.in_ring_R()
    assert invert_unit(q_over_p).in_ring_R()
    assert not PiSeries.constant(pr, Fraction(1, 3)).in_ring_R()


def test_integrality_undecidable_raises():
    pr = prof(3)
    f = PiSeries.constant(pr, Fraction(1, 3)).with_prec(-1)
    with pytest.raises(PrecisionError):
        f.is_integral()


@given(primes, coeff_lists, st.integers(0, 3), st.integers(2, 9))
def test_json_roundtrip(p, a, shift, e):
    pr = prof(p, cap_X=2)
    f = FamilySeries.from_ints(pr, [[c, -c] for c in a], prec=e).scale(PadicScalar.from_int(1, p).shift(-shift))
    g = series_from_json(pr, f.to_json())
    assert type(g) is FamilySeries
    assert g.num == f.num and g.shift == f.shift and list(g.prec) == list(f.prec)


@pytest.mark.parametrize("p,g", [(3, 2), (5, 2), (7, 3), (11, 2)])
def test_primitive_root_mod_p2(p, g):
    assert primitive_root_mod_p2(p) == g
    assert pow(g, p - 1, p * p) != 1


def test_gamma_element_rejects_non_units():
    with pytest.raises(ValueError):
        GammaElement(6, 3)
