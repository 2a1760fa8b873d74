"""p-adic scalars with explicit precision bookkeeping.

A :class:`PadicScalar` stores ``unit * p**valuation`` together with an
absolute precision: the value is known modulo ``p**prec``.  ``prec=None``
marks an exact element of ``Z[1/p]``.  Arithmetic never claims more
precision than the operands justify.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache


class PrecisionError(ArithmeticError):
    """A result cannot be determined at the tracked precision."""


class IntegralityError(ArithmeticError):
    """A quantity that must be p-integral was found not to be."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=4096)
def ppow(p: int, e: int) -> int:
    return p**e


def vp_factorial(n: int, p: int) -> int:
    """Legendre's formula for v_p(n!)."""
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


@dataclass(frozen=True)
class PrecisionProfile:
    """Truncation caps shared by every object of one computation.

    ``cap_p`` is the number of p-adic digits guaranteed on every output
    coefficient, ``cap_pi`` the pi-adic truncation and ``cap_X`` the
    X-adic truncation.  ``guard`` extra digits absorb the losses of the
    internal divisions by p.
    """

    p: int
    cap_p: int
    cap_pi: int
    cap_X: int = 1
    guard: int = 6

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p={self.p!r} is not a prime")
        if self.p == 2:
            raise ValueError("p=2 is not supported: Gamma is not procyclic for p=2")
        for name in ("cap_p", "cap_pi", "cap_X"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.guard < 0:
            raise ValueError("guard must be >= 0")

    @property
    def work(self) -> int:
        """Working number of digits for integral inputs.

        Elements of the growth ring (v(a_i) + i/(p-1) >= 0) lose
        i/(p-1) digits at pi^i, so the top coefficient still carries
        ``cap_p + guard`` digits.
        """
        return self.cap_p + -(-(self.cap_pi - 1) // (self.p - 1)) + self.guard

    def with_caps(self, **kw) -> "PrecisionProfile":
        return replace(self, **kw)

    def to_json(self) -> dict:
        return {"p": self.p, "cap_p": self.cap_p, "cap_pi": self.cap_pi,
                "cap_X": self.cap_X, "guard": self.guard}

    @classmethod
    def from_json(cls, d: dict) -> "PrecisionProfile":
        return cls(int(d["p"]), int(d["cap_p"]), int(d["cap_pi"]),
                   int(d.get("cap_X", 1)), int(d.get("guard", 6)))


_SCALAR_RE = re.compile(
    r"^\s*(?P<u>[+-]?\d+)\s*(?:\*\s*(?P<b>p|\d+)\s*\^\s*(?P<v>[+-]?\d+))?"
    r"\s*(?:\(\s*mod\s+(?P<b2>p|\d+)\s*\^\s*(?P<w>[+-]?\d+)\s*\))?\s*$")


@dataclass(frozen=True)
class PadicScalar:
    """``unit * p**valuation`` known modulo ``p**prec`` (absolute).

    Zeros have ``unit == 0``; an exact zero has ``prec is None`` while an
    inexact zero carries ``valuation == prec``.
    """

    p: int
    unit: int
    valuation: int
    prec: int | None = None

    def __post_init__(self):
        u, v, w = self.unit, self.valuation, self.prec
        if u == 0:
            object.__setattr__(self, "valuation", 0 if w is None else w)
            return
        if u % self.p == 0:
            k = vp(u, self.p)
            u //= ppow(self.p, k)
            v += k
        if w is not None:
            rel = w - v
            if rel <= 0:
                u, v = 0, w
            else:
                u %= ppow(self.p, rel)
        object.__setattr__(self, "unit", u)
        object.__setattr__(self, "valuation", v)

    # -- constructors -------------------------------------------------
    @classmethod
    def from_int(cls, n: int, p: int, prec: int | None = None) -> "PadicScalar":
        if n == 0:
            return cls(p, 0, 0, prec)
        v = vp(n, p)
        return cls(p, n // ppow(p, v), v, prec)

    @classmethod
    def from_rational(cls, x, p: int, prec: int | None = None) -> "PadicScalar":
        x = Fraction(x)
        if x.denominator == 1:
            return cls.from_int(x.numerator, p, prec)
        num, den = x.numerator, x.denominator
        vd = vp(den, p)
        den //= ppow(p, vd)
        if den == 1:
            return cls.from_int(num, p, prec).shift(-vd)
        if prec is None:
            raise PrecisionError(f"{x} is not in Z[1/p]; an absolute precision is required")
        vn = vp(num, p) if num else 0
        rel = prec - (vn - vd)
        if rel <= 0 or num == 0:
            return cls(p, 0, 0, prec)
        m = ppow(p, rel)
        unit = (num // ppow(p, vn)) * pow(den, -1, m) % m
        return cls(p, unit, vn - vd, prec)

    @classmethod
    def zero(cls, p: int, prec: int | None = None) -> "PadicScalar":
        return cls(p, 0, 0, prec)

    @classmethod
    def parse(cls, text: str, p: int) -> "PadicScalar":
        """Parse ``"u*p^v (mod p^w)"``; the base may be spelled ``p`` or as the prime."""
        if "/" in text and "*" not in text:
            return cls.from_rational(Fraction(text.strip()), p)
        m = _SCALAR_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse p-adic scalar {text!r}")
        for key in ("b", "b2"):
            b = m.group(key)
            if b is not None and b != "p" and int(b) != p:
                raise ValueError(f"scalar {text!r} is written in base {b}, expected {p}")
        u = int(m.group("u"))
        v = int(m.group("v") or 0)
        w = m.group("w")
        w = None if w is None else int(w)
        if u == 0:
            return cls(p, 0, 0, w)
        return cls(p, u, v, w)

    # -- queries ------------------------------------------------------
    @property
    def exact_zero(self) -> bool:
        return self.unit == 0 and self.prec is None

    def is_zero(self) -> bool:
        """Zero at the tracked precision."""
        return self.unit == 0

    @property
    def relprec(self) -> float:
        if self.prec is None:
            return math.inf
        return self.prec - self.valuation

    def val(self):
        """Valuation, ``math.inf`` for an exact zero (lower bound for inexact zeros)."""
        if self.exact_zero:
            return math.inf
        return self.valuation

    def lift(self) -> int:
        """Integer representative; requires valuation >= 0."""
        if self.unit == 0:
            return 0
        if self.valuation < 0:
            raise IntegralityError(f"{self} is not p-integral")
        return self.unit * ppow(self.p, self.valuation)

    def to_fraction(self) -> Fraction:
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def shift(self, k: int) -> "PadicScalar":
        """Multiply by p**k."""
        if self.unit == 0:
            return PadicScalar(self.p, 0, 0, None if self.prec is None else self.prec + k)
        return PadicScalar(self.p, self.unit, self.valuation + k,
                           None if self.prec is None else self.prec + k)

    def with_prec(self, prec: int | None) -> "PadicScalar":
        """Forget digits beyond ``prec`` (never adds any)."""
        if prec is None:
            return self
        w = prec if self.prec is None else min(prec, self.prec)
        return PadicScalar(self.p, self.unit, self.valuation, w)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError("mixing scalars over different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicScalar.from_rational(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        prec = _min_prec(self.prec, other.prec)
        if self.unit == 0 and other.unit == 0:
            return PadicScalar(p, 0, 0, prec)
        terms = [(s.unit, s.valuation) for s in (self, other) if s.unit != 0]
        v0 = min(v for _, v in terms)
        x = sum(u * ppow(p, v - v0) for u, v in terms)
        if x == 0:
            return PadicScalar(p, 0, 0, prec)
        return PadicScalar(p, x, v0, prec)

    __radd__ = __add__

    def __neg__(self):
        return PadicScalar(self.p, -self.unit, self.valuation, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.exact_zero or other.exact_zero:
            return PadicScalar(p, 0, 0, None)
        prec = _min_prec(_add_prec(self.prec, other.valuation),
                         _add_prec(other.prec, self.valuation))
        if self.unit == 0 or other.unit == 0:
            return PadicScalar(p, 0, 0, prec)
        return PadicScalar(p, self.unit * other.unit, self.valuation + other.valuation, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.exact_zero:
            raise ZeroDivisionError("division by an exact p-adic zero")
        if other.unit == 0:
            raise PrecisionError("division by a p-adic zero known to 0 digits")
        p = self.p
        rel = min(self.relprec, other.relprec)
        v = self.valuation - other.valuation
        if self.unit == 0:
            prec = None if self.prec is None else self.prec - other.valuation
            return PadicScalar(p, 0, 0, prec)
        if rel == math.inf:
            q = Fraction(self.unit, other.unit)
            if q.denominator != 1:
                raise PrecisionError("exact quotient is not in Z[1/p]; give a precision")
            return PadicScalar(p, q.numerator, v, None)
        m = ppow(p, int(rel))
        return PadicScalar(p, self.unit * pow(other.unit, -1, m) % m, v, v + int(rel))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return PadicScalar.from_int(1, self.p) / (self ** (-n))
        out = PadicScalar.from_int(1, self.p)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, PadicScalar) else other
        if other is NotImplemented or not isinstance(other, PadicScalar):
            return NotImplemented
        return (self - other).unit == 0

    def __hash__(self):
        return hash((self.p, self.unit, self.valuation, self.prec))

    def __str__(self):
        p = self.p
        if self.unit == 0:
            return "0" if self.prec is None else f"0 (mod {p}^{self.prec})"
        s = f"{self.unit}*{p}^{self.valuation}"
        if self.prec is not None:
            s += f" (mod {p}^{self.prec})"
        return s

    def __repr__(self):
        return f"PadicScalar({self})"


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_prec(prec, v):
    return None if prec is None else prec + v


def valuation(a: PadicScalar):
    return a.val()


def binomial(a: PadicScalar | int, i: int, p: int | None = None) -> PadicScalar:
    """Generalized binomial coefficient a(a-1)...(a-i+1)/i! for a in Z_p.

    Computed from an integer representative of ``a`` with exact integer
    arithmetic; an inexact ``a`` loses v_p(i!) digits.
    """
    if i < 0:
        raise ValueError("i must be >= 0")
    if isinstance(a, int):
        if p is None:
            raise ValueError("p is required for integer input")
        a = PadicScalar.from_int(a, p)
    p = a.p
    if a.unit != 0 and a.valuation < 0:
        raise IntegralityError("binomial needs a p-adic integer")
    r = a.lift()
    num = 1
    for t in range(i):
        num *= r - t
    c = num // math.factorial(i)
    prec = None if a.prec is None else a.prec - vp_factorial(i, p)
    return PadicScalar.from_int(c, p, prec)
