import json

import pytest

import oracle
from wachfam.lambdas import (LambdaPair, cache_filename, compute_z, floor_m, lambda_pair,
                             lambda_ratio_power, minimal_m, q_n, q_over_gamma_q,
                             q_series, ratio_gamma, z_valuations)
from wachfam.padic import PadicScalar, PrecisionProfile
from wachfam.series import GammaElement, frobenius, gamma_act, invert_unit

PROFILES = [PrecisionProfile(3, 8, 16, 1), PrecisionProfile(5, 8, 16, 1),
            PrecisionProfile(7, 8, 16, 1)]


@pytest.fixture(params=PROFILES, ids=lambda pr: f"p{pr.p}")
def pr(request):
    return request.param


def inv_p(p):
    return PadicScalar.from_int(1, p).shift(-1)


def test_q_has_constant_term_p(pr):
    q = q_series(pr)
    assert q.coeff(0) == pr.p and q.coeff(pr.p - 1) == 1
    assert q_n(pr, 4).coeff(0) == pr.p


def test_lambdas_match_naive_product(pr):
    lams = lambda_pair(pr)
    n = 8
    lp, lm = oracle.lambdas(pr.p, n, lams.factors_used + 4)
    # the oracle is truncated at n terms; compare on those
    assert oracle.agrees(lams.lambda_plus.truncate_pi(n), lp + [0] * (pr.cap_pi - n), pr.cap_p)
    assert oracle.agrees(lams.lambda_minus.truncate_pi(n), lm + [0] * (pr.cap_pi - n), pr.cap_p)


def test_lambda_constant_terms_are_one(pr):
    lams = lambda_pair(pr)
    assert lams.lambda_plus.coeff(0) == 1
    assert lams.lambda_minus.coeff(0) == 1


def test_frobenius_identities(pr):
    lams = lambda_pair(pr)
    q = q_series(pr)
    assert frobenius(lams.lambda_minus) == lams.lambda_plus
    assert frobenius(lams.lambda_plus) * q.scale(inv_p(pr.p)) == lams.lambda_minus


def test_lambdas_lie_in_growth_ring(pr):
    lams = lambda_pair(pr)
    assert lams.lambda_plus.in_ring_R() and lams.lambda_minus.in_ring_R()
    assert lams.lambda_plus.gauss_precision() >= pr.cap_p


@pytest.mark.parametrize("chi_of", [lambda p: GammaElement.default_generator(p).chi,
                                    lambda p: 1 + p])
def test_gamma_ratios_are_integral_units(pr, chi_of):
    g = GammaElement(chi_of(pr.p), pr.p)
    lams = lambda_pair(pr)
    for lam in (lams.lambda_plus, lams.lambda_minus):
        r = ratio_gamma(lam, g)
        assert r.coeff(0) == 1 and r.is_integral()


def test_q_over_gamma_q_cross_check(pr):
    g = GammaElement(1 + pr.p, pr.p)
    q = q_series(pr)
    direct = q * invert_unit(gamma_act(g, q))
    assert q_over_gamma_q(pr, g) == direct.with_prec(q_over_gamma_q(pr, g).prec)


def test_factor_count_grows_linearly_with_precision():
    used = [lambda_pair(PrecisionProfile(3, c, 20, 1)).factors_used for c in (6, 12, 24)]
    assert used[0] < used[1] < used[2]
    assert used[2] - used[1] <= 2 * (used[1] - used[0]) + 2


@pytest.mark.parametrize("p", [3, 5, 7])
def test_minimal_m_never_exceeds_floor_bound(p):
    pr = PrecisionProfile(p, 8, 2 * p + 4, 1)
    for k in range(2, 2 * p + 4):
        assert minimal_m(pr, k) <= floor_m(k, p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_minimal_m_vanishes_at_p_plus_one(p):
    pr = PrecisionProfile(p, 8, 2 * p + 4, 1)
    assert minimal_m(pr, p + 1) == 0


def test_minimal_m_matches_naive_ratio_valuations():
    p, n = 3, 9
    pr = PrecisionProfile(p, 8, n, 1)
    lams = lambda_pair(pr)
    lp, lm = oracle.lambdas(p, n, lams.factors_used + 4)
    ratio = oracle.mul(lm, oracle.inv(lp))
    for k in range(2, 10):
        r = oracle.power(ratio, k - 1)
        want = max([0] + [-oracle.vp_frac(c, p) for c in r[: k - 1]])
        assert minimal_m(pr, k) == want


def test_compute_z_fails_below_minimal_m():
    pr = PrecisionProfile(3, 8, 12, 1)
    assert minimal_m(pr, 5) == 1
    assert compute_z(pr, 5, 0) is None
    zd = compute_z(pr, 5, 1)
    assert zd.z.is_integral() and zd.z.pi_order() == 0


def test_z_at_p3_k4():
    pr = PrecisionProfile(3, 8, 12, 1)
    zd = compute_z(pr, 4, floor_m(4, 3))
    assert zd.m == 1 and zd.z0 == 3
    # degree <= k-2
    assert all(zd.z.coeff(j).is_zero() for j in range(3, pr.cap_pi))


def test_compute_z_rejects_short_truncation():
    with pytest.raises(ValueError):
        compute_z(PrecisionProfile(3, 8, 4, 1), 8, 3)


def test_z_valuations_consistent_with_ratio(pr):
    lams = lambda_pair(pr)
    r = lambda_ratio_power(lams, 5)
    assert z_valuations(pr, 5, lams) == [r.coeff(j).val() for j in range(4)]


def test_disk_cache_roundtrip(tmp_path):
    from wachfam import lambdas as mod
    pr = PrecisionProfile(5, 6, 12, 1)
    mod._CACHE.clear()
    a = lambda_pair(pr, cache_dir=tmp_path)
    path = tmp_path / cache_filename(pr)
    assert path.exists()
    mod._CACHE.clear()
    b = lambda_pair(pr, cache_dir=tmp_path)
    assert b.lambda_plus == a.lambda_plus and b.lambda_minus == a.lambda_minus
    assert b.lambda_plus.to_json() == a.lambda_plus.to_json()
    assert LambdaPair.from_json(json.loads(path.read_text())).factors_used == a.factors_used


def test_cache_key_ignores_x_cap():
    a = PrecisionProfile(3, 6, 12, 1)
    b = PrecisionProfile(3, 6, 12, 4)
    assert cache_filename(a) == cache_filename(b)
    assert lambda_pair(b).profile == b
