"""The products lambda_+ and lambda_-, their Gamma-ratios, and the polynomial z."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path

from .padic import IntegralityError, binomial, PadicScalar, PrecisionError, PrecisionProfile
from .series import (GammaElement, PiSeries, frobenius, gamma_act, invert_unit,
                     series_from_json, tail_bound)


def floor_m(k: int, p: int) -> int:
    """floor((k-2)/(p-1))."""
    return (k - 2) // (p - 1)


def _base(profile: PrecisionProfile) -> PrecisionProfile:
    return profile.with_caps(cap_X=1)


def q_series(profile: PrecisionProfile) -> PiSeries:
    """q = phi(pi)/pi = ((1+pi)^p - 1)/pi, exact."""
    from math import comb
    p = profile.p
    return PiSeries.from_ints(profile, [comb(p, i) for i in range(1, p + 1)])


def q_n(profile: PrecisionProfile, n: int, digits: int | None = None) -> PiSeries:
    """q_n = phi^(n-1)(q); exact for n=1, otherwise carried at ``digits`` (default: work)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = q_series(profile)
    if n == 1:
        return q
    q = q.with_prec(profile.work if digits is None else digits)
    for _ in range(n - 1):
        q = frobenius(q)
    return q


@dataclass(frozen=True)
class LambdaPair:
    profile: PrecisionProfile
    lambda_plus: PiSeries
    lambda_minus: PiSeries
    factors_used: int

    def rebase(self, profile: PrecisionProfile) -> "LambdaPair":
        if profile == self.profile:
            return self
        return LambdaPair(profile, self.lambda_plus.rebase(profile),
                          self.lambda_minus.rebase(profile), self.factors_used)

    def to_json(self) -> dict:
        return {"profile": self.profile.to_json(), "factors_used": self.factors_used,
                "lambda_plus": self.lambda_plus.to_json(),
                "lambda_minus": self.lambda_minus.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "LambdaPair":
        pr = PrecisionProfile.from_json(d["profile"])
        return cls(pr, series_from_json(pr, d["lambda_plus"]),
                   series_from_json(pr, d["lambda_minus"]), int(d["factors_used"]))


_CACHE: dict[tuple, LambdaPair] = {}
_CACHE_LOCK = threading.Lock()


def cache_key(profile: PrecisionProfile) -> tuple:
    return (profile.p, profile.cap_p, profile.cap_pi, profile.guard)


def cache_filename(profile: PrecisionProfile) -> str:
    digest = hashlib.sha256(repr(cache_key(profile)).encode()).hexdigest()[:16]
    return f"lambda-{digest}.json"


def _compute_lambda_pair(profile: PrecisionProfile, budget: int) -> LambdaPair:
    p = profile.p
    inv_p = PadicScalar.from_int(1, p).shift(-1)
    qn = q_series(profile).with_prec(profile.work)
    lam_minus = PiSeries.one(profile)
    lam_plus = PiSeries.one(profile)
    n = 1
    used = 0
    work = profile.work
    while True:
        factor = qn.scale(inv_p)
        if (factor - 1).with_prec(work).is_zero():
            break
        if used >= budget:
            raise PrecisionError(f"lambda products did not stabilise within {budget} factors")
        if n % 2:
            lam_minus = lam_minus * factor
        else:
            lam_plus = lam_plus * factor
        used += 1
        n += 1
        qn = frobenius(qn).with_prec(work)
    # every later factor is 1 as well; certify the next one
    if not (frobenius(qn).scale(inv_p) - 1).with_prec(work).is_zero():
        raise PrecisionError("lambda products not stabilised")
    # the omitted tail is 1 + O(p^work)
    lam_plus = lam_plus.with_prec(tail_bound(lam_plus, work))
    lam_minus = lam_minus.with_prec(tail_bound(lam_minus, work))
    return LambdaPair(profile, lam_plus, lam_minus, used)


def lambda_pair(profile: PrecisionProfile, *, budget: int = 400,
                cache_dir: str | os.PathLike | None = None) -> LambdaPair:
    """lambda_+ = prod q_{2n}/p and lambda_- = prod q_{2n-1}/p, truncated once stable.

    Results are cached in memory keyed by (p, cap_p, cap_pi, guard) and,
    when ``cache_dir`` is given, on disk under a digest of that key.
    """
    key = cache_key(profile)
    with _CACHE_LOCK:
        hit = _CACHE.get(key)
    if hit is None and cache_dir is not None:
        path = Path(cache_dir) / cache_filename(profile)
        if path.exists():
            hit = LambdaPair.from_json(json.loads(path.read_text()))
    if hit is None:
        hit = _compute_lambda_pair(_base(profile), budget)
        if cache_dir is not None:
            _atomic_write(Path(cache_dir) / cache_filename(profile),
                          json.dumps(hit.to_json(), sort_keys=True))
    with _CACHE_LOCK:
        _CACHE.setdefault(key, hit)
    return hit.rebase(profile)


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def ratio_gamma(lam: PiSeries, gamma: GammaElement) -> PiSeries:
    """lam / gamma(lam), checked to lie in 1 + pi Z_p[[pi]]."""
    r = lam * invert_unit(gamma_act(gamma, lam))
    if r.coeff(0) != 1:
        raise IntegralityError(f"constant term of lambda/gamma(lambda) is {r.coeff(0)}, not 1")
    if not r.is_integral():
        raise IntegralityError("lambda/gamma(lambda) is not integral")
    return r


def q_over_gamma_q(profile: PrecisionProfile, gamma: GammaElement) -> PiSeries:
    """q/gamma(q) = e / phi(e) with e = gamma(pi)/pi, a unit of Z_p[[pi]].

    Going through e avoids dividing by gamma(q), whose constant term is p.
    """
    p = profile.p
    e = PiSeries.from_ints(profile, [binomial(gamma.chi, i + 1, p).lift()
                                     for i in range(profile.cap_pi)])
    return e * invert_unit(frobenius(e))


@dataclass(frozen=True)
class ZData:
    k: int
    m: int
    z: PiSeries
    full_ratio: PiSeries

    @property
    def z0(self) -> PadicScalar:
        return self.z.coeff(0)


def lambda_ratio_power(lams: LambdaPair, k: int) -> PiSeries:
    """(lambda_- / lambda_+)^(k-1)."""
    return (lams.lambda_minus * invert_unit(lams.lambda_plus)) ** (k - 1)


def z_valuations(profile: PrecisionProfile, k: int, lams: LambdaPair | None = None) -> list:
    """Valuations of the first k-1 coefficients of (lambda_-/lambda_+)^(k-1)."""
    lams = lams or lambda_pair(profile)
    r = lambda_ratio_power(lams, k)
    out = []
    for j in range(k - 1):
        c = r.coeff(j)
        if c.unit == 0 and (c.prec is None or c.prec < 0):
            raise PrecisionError(f"coefficient pi^{j} of the ratio is unknown")
        out.append(c.val())
    return out


def compute_z(profile: PrecisionProfile, k: int, m: int,
              lams: LambdaPair | None = None) -> ZData | None:
    """Truncate p^m (lambda_-/lambda_+)^(k-1) to degree k-2.

    Returns None when the truncation is not integral (m too small);
    raises PrecisionError when integrality cannot be decided.
    """
    if k < 2 or m < 0:
        raise ValueError("need k >= 2 and m >= 0")
    if profile.cap_pi < k - 1:
        raise ValueError("cap_pi must be >= k-1")
    lams = (lams or lambda_pair(profile)).rebase(profile)
    ratio = lambda_ratio_power(lams, k)
    if not ratio.in_ring_R():
        raise IntegralityError("(lambda_-/lambda_+)^(k-1) left the growth ring")
    full = ratio.scale(PadicScalar.from_int(profile.p ** m, profile.p))
    for j in range(k - 1):
        c = full.coeff(j)
        if c.unit == 0:
            if c.prec is not None and c.prec < 0:
                raise PrecisionError(f"integrality of z_{j} undecidable")
        elif c.valuation < 0:
            return None
    return ZData(k, m, full.truncate_pi(k - 1), full)


def minimal_m(profile: PrecisionProfile, k: int, lams: LambdaPair | None = None) -> int:
    """Smallest m >= 0 for which compute_z succeeds."""
    if k < 2:
        raise ValueError("k must be >= 2")
    vals = z_valuations(profile, k, lams)
    m = max([0] + [-int(v) for v in vals if v != float("inf")])
    if m > floor_m(k, profile.p):
        raise IntegralityError(f"minimal m={m} exceeds floor((k-2)/(p-1))")
    return m
