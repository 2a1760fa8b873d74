"""Truncated power series in pi (optionally with polynomial coefficients in X).

Storage is a flat list of integer numerators over a common denominator
``p**shift``; entry ``j * nx + x`` is the coefficient of ``pi^j X^x``.
Precision is tracked per pi-degree: coefficient ``j`` is known modulo
``p**prec[j]`` (absolute, uniform in X); ``inf`` marks exact rows.

Products propagate precision with the rule
``prec(fg)_j = min_{a+b=j} min(prec_f[a] + v(g_b), prec_g[b] + v(f_a))``
so that series in the growth ring (v(a_i) + i/(p-1) >= 0) can be
multiplied without spurious loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .padic import (IntegralityError, PadicScalar, PrecisionError, PrecisionProfile,
                    binomial, ppow, vp)

INF = math.inf


def _kmul(a: list[int], b: list[int], n: int, nx: int) -> list[int]:
    """Truncated product of two nonnegative (pi, X) coefficient grids.

    Both grids are packed into one big integer each (Kronecker
    substitution) so the convolution runs inside the bigint multiply.
    """
    ba = max((x.bit_length() for x in a), default=0)
    bb = max((x.bit_length() for x in b), default=0)
    if ba == 0 or bb == 0:
        return [0] * (n * nx)
    w = 2 * nx - 1
    nbytes = (ba + bb + (n * nx).bit_length() + 8) // 8

    def pack(v):
        buf = bytearray(nbytes * n * w)
        for j in range(n):
            base = j * nx
            for x in range(nx):
                c = v[base + x]
                if c:
                    off = (j * w + x) * nbytes
                    buf[off:off + nbytes] = c.to_bytes(nbytes, "little")
        return int.from_bytes(buf, "little")

    total = nbytes * n * w
    prod = (pack(a) * pack(b)) & ((1 << (8 * total)) - 1)
    raw = prod.to_bytes(total, "little")
    out = []
    for j in range(n):
        for x in range(nx):
            off = (j * w + x) * nbytes
            out.append(int.from_bytes(raw[off:off + nbytes], "little"))
    return out


def _signed_kmul(a, b, n, nx):
    ap = [x if x > 0 else 0 for x in a]
    an = [-x if x < 0 else 0 for x in a]
    bp = [x if x > 0 else 0 for x in b]
    bn = [-x if x < 0 else 0 for x in b]
    out = _kmul(ap, bp, n, nx)
    for sgn, u, v in ((-1, ap, bn), (-1, an, bp), (1, an, bn)):
        if any(u) and any(v):
            out = [o + sgn * t for o, t in zip(out, _kmul(u, v, n, nx))]
    return out


@dataclass(frozen=True)
class GammaElement:
    """An element of Gamma, recorded by the integer value of chi(gamma)."""

    chi: int
    p: int

    def __post_init__(self):
        if self.chi % self.p == 0:
            raise ValueError(f"chi={self.chi} is not a p-adic unit")

    @classmethod
    def from_scalar(cls, c: PadicScalar) -> "GammaElement":
        if c.val() != 0:
            raise ValueError("chi(gamma) must have valuation 0")
        return cls(c.lift(), c.p)

    @classmethod
    def identity(cls, p: int) -> "GammaElement":
        return cls(1, p)

    @classmethod
    def default_generator(cls, p: int) -> "GammaElement":
        return cls(primitive_root_mod_p2(p), p)

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        if self.p != other.p:
            raise ValueError("different primes")
        return GammaElement(self.chi * other.chi, self.p)

    @property
    def key(self) -> str:
        return str(self.chi)

    def scalar(self) -> PadicScalar:
        return PadicScalar.from_int(self.chi, self.p)


def primitive_root_mod_p2(p: int) -> int:
    """Smallest g generating (Z/p^2)^*, hence topologically generating Z_p^*."""
    order = p * (p - 1)
    m = p * p
    factors = {q for q in range(2, order + 1) if order % q == 0 and all(q % r for r in range(2, q))}
    for g in range(2, m):
        if g % p and all(pow(g, order // q, m) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {p}^2")


class FamilySeries:
    """Element of Q_p[[pi]][X] truncated mod (pi^cap_pi, X^cap_X)."""

    __slots__ = ("profile", "num", "shift", "prec", "_vals")

    def __init__(self, profile: PrecisionProfile, num, shift: int, prec, *, _raw=False):
        self.profile = profile
        n, nx = profile.cap_pi, self.nx_for(profile)
        if len(num) != n * nx:
            raise ValueError(f"expected {n * nx} coefficients, got {len(num)}")
        prec = np.array(prec, dtype=float) if not isinstance(prec, np.ndarray) else prec
        if prec.shape == ():
            prec = np.full(n, float(prec))
        if _raw:
            self.num, self.shift, self.prec = num, shift, prec
        else:
            self.num, self.shift, self.prec = _normalize(profile.p, list(num), shift, prec, nx)
        self._vals = None

    @staticmethod
    def nx_for(profile):
        return profile.cap_X

    @property
    def nx(self) -> int:
        return self.nx_for(self.profile)

    @property
    def n(self) -> int:
        return self.profile.cap_pi

    @property
    def p(self) -> int:
        return self.profile.p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, profile, prec=INF):
        return cls(profile, [0] * (profile.cap_pi * cls.nx_for(profile)), 0, prec)

    @classmethod
    def constant(cls, profile, c):
        """The series with constant coefficient c (int, Fraction or PadicScalar)."""
        nx = cls.nx_for(profile)
        n = profile.cap_pi
        if not isinstance(c, PadicScalar):
            c = PadicScalar.from_rational(c, profile.p)
        num = [0] * (n * nx)
        shift = max(0, -c.valuation) if c.unit else 0
        if c.unit:
            num[0] = c.unit * ppow(profile.p, c.valuation + shift)
        prec = np.full(n, INF)
        if c.prec is not None:
            prec[:] = c.prec
        return cls(profile, num, shift, prec)

    @classmethod
    def one(cls, profile):
        return cls.constant(profile, 1)

    @classmethod
    def from_ints(cls, profile, rows, prec=INF):
        """``rows[j]`` is an int (X-free) or a list of ints indexed by X-degree."""
        nx = cls.nx_for(profile)
        num = [0] * (profile.cap_pi * nx)
        for j, r in enumerate(rows):
            if j >= profile.cap_pi:
                break
            r = [r] if isinstance(r, int) else r
            for x, c in enumerate(r[:nx]):
                num[j * nx + x] = c
        return cls(profile, num, 0, prec)

    @classmethod
    def pi(cls, profile):
        return cls.from_ints(profile, [0, 1])

    @classmethod
    def from_scalars(cls, profile, rows):
        """Build from ``rows[j][x]`` PadicScalars; row precision is the row minimum."""
        nx = cls.nx_for(profile)
        n = profile.cap_pi
        p = profile.p
        prec = np.full(n, INF)
        flat = {}
        for j, r in enumerate(rows[:n]):
            r = r if isinstance(r, (list, tuple)) else [r]
            for x, c in enumerate(r[:nx]):
                if not isinstance(c, PadicScalar):
                    c = PadicScalar.from_rational(c, p)
                flat[j * nx + x] = c
                if c.prec is not None:
                    prec[j] = min(prec[j], c.prec)
        shift = max([0] + [-c.valuation for c in flat.values() if c.unit])
        num = [0] * (n * nx)
        for k, c in flat.items():
            if c.unit:
                num[k] = c.unit * ppow(p, c.valuation + shift)
        return cls(profile, num, shift, prec)

    def _like(self, num, shift, prec, raw=False):
        return type(self)(self.profile, num, shift, prec, _raw=raw)

    # -- access -------------------------------------------------------
    def coeff(self, j: int, x: int = 0) -> PadicScalar:
        p = self.p
        e = self.prec[j]
        prec = None if e == INF else int(e)
        c = self.num[j * self.nx + x] if x < self.nx else 0
        if c == 0:
            return PadicScalar(p, 0, 0, prec)
        v = vp(c, p)
        return PadicScalar(p, c // ppow(p, v), v - self.shift, prec)

    def row(self, j: int) -> list[PadicScalar]:
        return [self.coeff(j, x) for x in range(self.nx)]

    def x_part(self, x: int) -> "PiSeries":
        """Coefficient of X^x as a series in pi."""
        nx = self.nx
        return PiSeries(self.profile, [self.num[j * nx + x] for j in range(self.n)],
                        self.shift, self.prec.copy())

    def vals(self) -> np.ndarray:
        """Per pi-degree lower bound of the coefficient valuations."""
        if self._vals is None:
            p, nx, s = self.p, self.nx, self.shift
            out = np.empty(self.n)
            for j in range(self.n):
                g = math.gcd(*self.num[j * nx:(j + 1) * nx]) if nx > 1 else abs(self.num[j])
                out[j] = self.prec[j] if g == 0 else vp(g, p) - s
            self._vals = out
        return self._vals

    def valuation(self):
        return float(self.vals().min())

    def gauss_precision(self):
        """Number of digits known at every coefficient."""
        return float(self.prec.min())

    def is_exact(self) -> bool:
        return bool(np.all(self.prec == INF))

    def is_zero(self) -> bool:
        """Zero at the tracked precision."""
        return not any(self.num)

    def is_exact_zero(self) -> bool:
        return self.is_zero() and self.is_exact()

    def zero_to(self, digits) -> bool:
        """Zero with at least ``digits`` known digits at every coefficient."""
        if self.gauss_precision() < digits:
            raise PrecisionError(f"only {self.gauss_precision()} digits known, {digits} needed")
        return self.is_zero()

    def pi_order(self) -> int:
        nx = self.nx
        for j in range(self.n):
            if any(self.num[j * nx:(j + 1) * nx]):
                return j
        return self.n

    def is_integral(self) -> bool:
        """All coefficients in Z_p (decided at the tracked precision)."""
        v = self.vals()
        for j in range(self.n):
            if v[j] < 0:
                if self.prec[j] <= v[j] or not any(self.num[j * self.nx:(j + 1) * self.nx]):
                    raise PrecisionError(f"integrality of pi^{j} undecidable at precision {self.prec[j]}")
                return False
        return True

    def in_ring_R(self) -> bool:
        """True iff v_p(a_i) + i/(p-1) >= 0 for every tracked coefficient."""
        v = self.vals()
        p1 = self.p - 1
        for j in range(self.n):
            if v[j] * p1 + j < 0:
                zero_row = not any(self.num[j * self.nx:(j + 1) * self.nx])
                if zero_row:
                    raise PrecisionError(f"ring-R membership of pi^{j} undecidable")
                return False
        return True

    # -- precision manipulation --------------------------------------
    def with_prec(self, digits) -> "FamilySeries":
        """Forget digits: prec := min(prec, digits) (scalar or per pi-degree)."""
        return self._like(list(self.num), self.shift, np.minimum(self.prec, digits))

    def truncate_pi(self, d: int) -> "FamilySeries":
        """Keep pi-degrees < d; higher rows become exact zeros."""
        nx = self.nx
        num = list(self.num)
        prec = self.prec.copy()
        for j in range(d, self.n):
            num[j * nx:(j + 1) * nx] = [0] * nx
            prec[j] = INF
        return self._like(num, self.shift, prec)

    def shift_pi(self, k: int) -> "FamilySeries":
        """Multiply by pi^k."""
        nx, n = self.nx, self.n
        num = [0] * (k * nx) + self.num[: (n - k) * nx] if k < n else [0] * (n * nx)
        prec = np.concatenate([np.full(min(k, n), INF), self.prec[: max(n - k, 0)]])
        return self._like(num, self.shift, prec)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FamilySeries):
            if other.profile != self.profile:
                raise ValueError("series over different precision profiles")
            return other
        if isinstance(other, (int, Fraction, PadicScalar)):
            return type(self).constant(self.profile, other)
        return NotImplemented

    def _align(self, other):
        """Return (num_a, num_b, shift, nx, cls) on a common layout."""
        cls = FamilySeries if (type(self) is FamilySeries or type(other) is FamilySeries) else type(self)
        a = self.as_family() if cls is FamilySeries else self
        b = other.as_family() if cls is FamilySeries else other
        s = max(a.shift, b.shift)
        p = self.p
        na = a.num if a.shift == s else [c * ppow(p, s - a.shift) for c in a.num]
        nb = b.num if b.shift == s else [c * ppow(p, s - b.shift) for c in b.num]
        return na, nb, s, cls

    def as_family(self) -> "FamilySeries":
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        na, nb, s, cls = self._align(other)
        return cls(self.profile, [x + y for x, y in zip(na, nb)], s,
                   np.minimum(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.num], self.shift, self.prec.copy())

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        na, nb, s, cls = self._align(other)
        return cls(self.profile, [x - y for x, y in zip(na, nb)], s,
                   np.minimum(self.prec, other.prec))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FamilySeries":
        """Multiply by a scalar (int, Fraction or PadicScalar)."""
        if not isinstance(c, PadicScalar):
            c = PadicScalar.from_rational(c, self.p)
        if c.exact_zero:
            return type(self).zero(self.profile)
        p = self.p
        vals = self.vals()
        cprec = INF if c.prec is None else c.prec
        prec = np.minimum(self.prec + c.valuation, cprec + vals)
        if c.unit == 0:
            return self._like([0] * len(self.num), 0, prec)
        v = c.valuation
        shift = self.shift
        if v >= 0:
            mult = c.unit * ppow(p, v)
        else:
            mult, shift = c.unit, shift - v
        return self._like([x * mult for x in self.num], shift, prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.invert_unit() ** (-e)
        out = type(self).one(self.profile)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            if not isinstance(other, PadicScalar):
                other = PadicScalar.from_rational(other, self.p)
            return self.scale(PadicScalar.from_int(1, self.p) / other)
        return self * invert_unit(other)

    def __eq__(self, other):
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    # -- substitutions ------------------------------------------------
    def compose(self, g: "PiSeries") -> "FamilySeries":
        return compose(self, g)

    def frobenius(self):
        return frobenius(self)

    def gamma_act(self, gamma: GammaElement):
        return gamma_act(gamma, self)

    def invert_unit(self):
        return invert_unit(self)

    def evaluate_X(self, alpha):
        return evaluate_X(self, alpha)

    def reduce_mod_p(self):
        return reduce_mod_p(self)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        kind = "pi" if isinstance(self, PiSeries) else "family"
        return {"kind": kind, "pi_coeffs": [[str(c) for c in self.row(j)] for j in range(self.n)]}

    @classmethod
    def from_json(cls, profile, d: dict):
        p = profile.p
        rows = [[PadicScalar.parse(s, p) for s in r] for r in d["pi_coeffs"]]
        return cls.from_scalars(profile, rows)

    def __repr__(self):
        terms = []
        for j in range(self.n):
            for x in range(self.nx):
                c = self.coeff(j, x)
                if c.unit:
                    mono = "".join(s for s in ((f"pi^{j}" if j else ""), (f"X^{x}" if x else "")))
                    terms.append(f"({c.to_fraction()}){('*' + mono) if mono else ''}")
        return f"{type(self).__name__}({' + '.join(terms) or '0'}, prec>={self.gauss_precision()})"


class PiSeries(FamilySeries):
    """Element of Q_p[[pi]] truncated mod pi^cap_pi."""

    __slots__ = ()

    @staticmethod
    def nx_for(profile):
        return 1

    def as_family(self) -> FamilySeries:
        nx = self.profile.cap_X
        num = [0] * (self.n * nx)
        for j in range(self.n):
            num[j * nx] = self.num[j]
        return FamilySeries(self.profile, num, self.shift, self.prec.copy(), _raw=nx == 1)

    def coefficients(self) -> list[PadicScalar]:
        return [self.coeff(j) for j in range(self.n)]

    def rebase(self, profile: PrecisionProfile) -> "PiSeries":
        """Same series viewed under a profile differing only in cap_X."""
        if (profile.p, profile.cap_pi) != (self.p, self.n):
            raise ValueError("rebase needs the same p and cap_pi")
        return PiSeries(profile, list(self.num), self.shift, self.prec.copy(), _raw=True)


def _normalize(p, num, shift, prec, nx):
    n = len(prec)
    for j in range(n):
        e = prec[j]
        if e == INF:
            continue
        t = shift + int(e)
        lo, hi = j * nx, (j + 1) * nx
        if t <= 0:
            num[lo:hi] = [0] * nx
        else:
            m = ppow(p, t)
            num[lo:hi] = [c % m for c in num[lo:hi]]
    if shift > 0:
        g = math.gcd(*num) if num else 0
        if g == 0:
            shift = 0
        else:
            k = 0
            while k < shift and g % p == 0:
                g //= p
                k += 1
            if k:
                d = ppow(p, k)
                num = [c // d for c in num]
                shift -= k
    return num, shift, prec


@lru_cache(maxsize=16)
def _antidiagonal_index(n: int):
    """Index arrays picking (a, j - a) for 0 <= a <= j < n; masked cells point at slot n."""
    a = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    b = j - a
    return np.where(b >= 0, b, n)


def _mul_prec(pf, vf, pg, vg):
    """min over a+b=j of min(pf[a] + vg[b], pg[b] + vf[a]) (a min-plus convolution)."""
    n = len(pf)
    idx = _antidiagonal_index(n)
    vg_ = np.append(vg, INF)[idx]
    pg_ = np.append(pg, INF)[idx]
    with np.errstate(invalid="ignore"):
        cand = np.minimum(pf[:, None] + vg_, pg_ + vf[:, None])
    # inf + (-inf) cannot occur: valuations are bounded below by finite numbers or +inf
    skip = (pf == INF) & (vf == INF)
    cand[skip, :] = INF
    return cand.min(axis=0)


def _series_mul(f: FamilySeries, g: FamilySeries) -> FamilySeries:
    cls = FamilySeries if (type(f) is FamilySeries or type(g) is FamilySeries) else type(f)
    if cls is FamilySeries:
        f, g = f.as_family(), g.as_family()
    profile = f.profile
    n, nx, p = f.n, f.nx, f.p
    if f.is_exact_zero() or g.is_exact_zero():
        return cls.zero(profile)
    for a, b in ((f, g), (g, f)):
        if b.is_exact() and b.shift == 0 and not any(b.num[1:]):
            out = a.scale(b.num[0])
            return out.as_family() if cls is FamilySeries else out
    prec = _mul_prec(f.prec, f.vals(), g.prec, g.vals())
    shift = f.shift + g.shift
    finite = prec[prec < INF]
    if finite.size == 0:
        return cls(profile, _signed_kmul(f.num, g.num, n, nx), shift, prec)
    cap = finite.max()
    prec = np.where(prec == INF, cap, prec)
    t = shift + int(cap)
    if t <= 0:
        return cls(profile, [0] * (n * nx), 0, prec)
    m = ppow(p, t)
    return cls(profile, _kmul([c % m for c in f.num], [c % m for c in g.num], n, nx), shift, prec)


# -- substitution operators ------------------------------------------------

@lru_cache(maxsize=64)
def _power_table(profile: PrecisionProfile, key: tuple):
    """Numerators, shifts, precisions and valuations of g^0..g^(n-1)."""
    g = _SUBST_REGISTRY[(profile, key)]
    n = profile.cap_pi
    pows = [PiSeries.one(profile)]
    for _ in range(1, n):
        pows.append(pows[-1] * g)
    s = max(h.shift for h in pows)
    p = profile.p
    mat = [[c * ppow(p, s - h.shift) for c in h.num] for h in pows]
    P = np.array([h.prec for h in pows])
    V = np.empty((n, n))
    for i, h in enumerate(pows):
        for j in range(n):
            c = h.num[j]
            V[i, j] = h.prec[j] if c == 0 else vp(c, p) - h.shift
    return mat, s, P, V


_SUBST_REGISTRY: dict = {}


def _subst_key(g: PiSeries):
    return (g.shift, tuple(g.num), tuple(g.prec.tolist()))


def compose(f: FamilySeries, g: PiSeries) -> FamilySeries:
    """f(g(pi)) truncated mod pi^cap_pi; g must have an exactly zero constant term."""
    if not isinstance(g, PiSeries):
        raise TypeError("substitute a PiSeries for pi")
    if g.num[0] != 0 or g.prec[0] != INF:
        raise ValueError("compose needs g with zero constant term")
    profile = f.profile
    key = _subst_key(g)
    _SUBST_REGISTRY.setdefault((profile, key), g)
    mat, gs, PG, VG = _power_table(profile, key)
    n, nx, p = f.n, f.nx, f.p
    pf, vf = f.prec, f.vals()
    prec = np.minimum(pf[:, None] + VG, PG + vf[:, None]).min(axis=0)
    shift = f.shift + gs
    finite = prec[prec < INF]
    exact = finite.size == 0
    if not exact:
        cap = finite.max()
        prec = np.where(prec == INF, cap, prec)
        t = shift + int(cap)
        if t <= 0:
            return type(f)(profile, [0] * (n * nx), 0, prec)
        m = ppow(p, t)
    fnum = f.num if exact else [c % m for c in f.num]
    out = [0] * (n * nx)
    for i in range(n):
        rowf = fnum[i * nx:(i + 1) * nx]
        if not any(rowf):
            continue
        gi = mat[i] if exact else [c % m for c in mat[i]]
        for j in range(i, n):
            c = gi[j]
            if c:
                base = j * nx
                for x in range(nx):
                    if rowf[x]:
                        out[base + x] += rowf[x] * c
    return type(f)(profile, out, shift, prec)


@lru_cache(maxsize=64)
def phi_pi(profile: PrecisionProfile) -> PiSeries:
    """phi(pi) = (1+pi)^p - 1."""
    p = profile.p
    return PiSeries.from_ints(profile, [0] + [math.comb(p, i) for i in range(1, p + 1)])


@lru_cache(maxsize=256)
def gamma_pi(profile: PrecisionProfile, chi: int) -> PiSeries:
    """gamma(pi) = (1+pi)^chi - 1 expanded with generalized binomials."""
    p = profile.p
    coeffs = [0] + [binomial(chi, i, p).lift() for i in range(1, profile.cap_pi)]
    return PiSeries.from_ints(profile, coeffs)


def frobenius(f: FamilySeries) -> FamilySeries:
    return compose(f, phi_pi(f.profile))


def gamma_act(gamma: GammaElement, f: FamilySeries) -> FamilySeries:
    if gamma.p != f.p:
        raise ValueError("gamma and series over different primes")
    if gamma.chi == 1:
        return f
    return compose(f, gamma_pi(f.profile, gamma.chi))


def invert_unit(f: FamilySeries) -> FamilySeries:
    """Inverse in Q_p[[pi]][X]/(X^cap_X) by Newton iteration from 1/f(0,0)."""
    c = f.coeff(0, 0)
    if c.exact_zero:
        raise ZeroDivisionError("constant term is exactly zero")
    if c.unit == 0:
        raise PrecisionError("constant term is zero at the tracked precision")
    profile = f.profile
    if c.prec is None:
        c = c.with_prec(c.valuation + profile.work)
    g = type(f).constant(profile, PadicScalar.from_int(1, f.p) / c)
    steps = (f.n + f.nx).bit_length() + 1
    for _ in range(steps):
        g = g + g * (1 - f * g)
    err = 1 - f * g
    if not err.is_zero():
        raise PrecisionError("inverse did not converge at the tracked precision")
    # the true inverse differs from g by g*err
    return g.with_prec(tail_bound(g, err.prec))


def tail_bound(g: FamilySeries, digits) -> np.ndarray:
    """Precision of g * (1 + e) when e is only known to vanish mod p^digits."""
    d = np.broadcast_to(np.asarray(digits, dtype=float), (g.n,))
    return _mul_prec(d, d, np.full(g.n, INF), g.vals())


def evaluate_X(f: FamilySeries, alpha) -> PiSeries:
    """Substitute X := alpha (v_p(alpha) >= 1).

    The X-truncation contributes an error of valuation at least
    cap_X * v(alpha) + min(0, v(row)) in each pi-degree.
    """
    p = f.p
    if not isinstance(alpha, PadicScalar):
        alpha = PadicScalar.from_rational(alpha, p)
    if alpha.val() < 1:
        raise ValueError("evaluate_X needs alpha in pZ_p")
    nx, n = f.nx, f.n
    if type(f) is PiSeries:
        return f
    if alpha.is_zero() and alpha.exact_zero:
        return f.x_part(0)
    vals = f.vals()
    va = alpha.valuation if alpha.unit else alpha.prec
    aprec = INF if alpha.prec is None else alpha.prec
    a = alpha.lift()
    powers = [a**x for x in range(nx)]
    out = []
    for j in range(n):
        out.append(sum(f.num[j * nx + x] * powers[x] for x in range(nx)))
    floor = np.minimum(vals, 0)
    prec = np.minimum(f.prec, nx * va + floor)
    if aprec < INF and nx > 1:
        prec = np.minimum(prec, aprec + floor)
    return PiSeries(f.profile, out, f.shift, prec)


def reduce_mod_p(f: FamilySeries) -> FamilySeries:
    """Coefficientwise reduction to F_p (returned with one digit of precision)."""
    if f.gauss_precision() < 1:
        raise PrecisionError("need at least one known digit to reduce mod p")
    if not f.is_integral():
        raise IntegralityError("reduce_mod_p needs an integral series")
    p = f.p
    d = ppow(p, f.shift)
    return f._like([(c // d) % p for c in f.num], 0, np.full(f.n, 1.0))


def in_ring_R(f: FamilySeries) -> bool:
    return f.in_ring_R()


def series_from_json(profile, d):
    cls = FamilySeries if d.get("kind") == "family" else PiSeries
    return cls.from_json(profile, d)
