"""The matrices P(X) and G_gamma(X) of a one-parameter Wach module family.

P(X) = [[0, -1], [q^(k-1), X z]] and G_gamma is the unique matrix in
Id + pi M(2, Z_p[[pi, X]]) with P phi(G) = G gamma(P).  G is obtained
from a diagonal seed by a pi-adic lifting recurrence; each step solves
a 4x4 linear system over Z_p[X]/(X^cap_X).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .lambdas import (LambdaPair, compute_z, floor_m, lambda_pair, q_over_gamma_q,
                      q_series, ratio_gamma)
from .padic import IntegralityError, PadicScalar, PrecisionError, PrecisionProfile, ppow
from .series import (INF, FamilySeries, GammaElement, PiSeries, frobenius, gamma_act,
                     invert_unit, series_from_json)


class LiftError(ArithmeticError):
    """The lifting recurrence hit a non-invertible system or a nonzero residual."""

    def __init__(self, message: str, claim: str = "prop3.3"):
        super().__init__(message)
        self.claim = claim


# -- 2x2 matrices over series ----------------------------------------------

@dataclass(frozen=True)
class Mat2:
    a: FamilySeries
    b: FamilySeries
    c: FamilySeries
    d: FamilySeries

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls, profile: PrecisionProfile, kind=PiSeries) -> "Mat2":
        one, zero = kind.one(profile), kind.zero(profile)
        return cls(one, zero, zero, one)

    @classmethod
    def diag(cls, x, y) -> "Mat2":
        zero = type(x).zero(x.profile)
        return cls(x, zero, zero, y)

    @property
    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def profile(self) -> PrecisionProfile:
        return self.a.profile

    def map(self, f: Callable) -> "Mat2":
        return Mat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def __add__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self) -> "Mat2":
        return self.map(lambda e: -e)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def scale(self, s) -> "Mat2":
        """Multiply every entry by a scalar or a series."""
        return self.map(lambda e: e * s)

    def det(self) -> FamilySeries:
        return self.a * self.d - self.b * self.c

    def adj(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def frobenius(self) -> "Mat2":
        return self.map(frobenius)

    def gamma_act(self, gamma: GammaElement) -> "Mat2":
        return self.map(lambda e: gamma_act(gamma, e))

    def evaluate_X(self, alpha) -> "Mat2":
        return self.map(lambda e: e.evaluate_X(alpha))

    def as_family(self) -> "Mat2":
        return self.map(lambda e: e.as_family())

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries())

    def is_integral(self) -> bool:
        return all(e.is_integral() for e in self.entries())

    def pi_order(self) -> int:
        return min(e.pi_order() for e in self.entries())

    def gauss_precision(self) -> float:
        return min(e.gauss_precision() for e in self.entries())

    def with_prec(self, digits) -> "Mat2":
        return self.map(lambda e: e.with_prec(digits))

    def truncate_pi(self, d: int) -> "Mat2":
        return self.map(lambda e: e.truncate_pi(d))

    def __eq__(self, o) -> bool:
        if not isinstance(o, Mat2):
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def to_json(self) -> dict:
        return {"rows": [[e.to_json() for e in r] for r in self.rows]}

    @classmethod
    def from_json(cls, profile: PrecisionProfile, d: dict) -> "Mat2":
        return cls.from_rows([[series_from_json(profile, e) for e in r] for r in d["rows"]])


# -- polynomials in X with integer coefficients ------------------------------

def _pmul(a, b, cx):
    out = [0] * cx
    for i, x in enumerate(a):
        if x:
            for j in range(cx - i):
                out[i + j] += x * b[j]
    return out


def _pmat_mul(A, B, cx, mod):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = [0] * cx
            for t in range(k):
                if any(A[i][t]) and any(B[t][j]):
                    acc = [u + v for u, v in zip(acc, _pmul(A[i][t], B[t][j], cx))]
            row.append([c % mod for c in acc])
        out.append(row)
    return out


def _inverse_mod_p(M, p):
    """Inverse of a square integer matrix over F_p, or None if singular."""
    n = len(M)
    A = [[M[i][j] % p for j in range(n)] + [int(i == j) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = pow(A[col][col], -1, p)
        A[col] = [x * inv % p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


# -- the constant term P0 and the per-level solve ---------------------------

@dataclass(frozen=True)
class P0Matrix:
    """[[0, -1], [p^(k-1), a]] over Z_p[X]/(X^cx); ``slot`` holds a's coefficients."""

    p: int
    k: int
    slot: tuple
    cx: int

    @classmethod
    def family(cls, p: int, k: int, m: int, cx: int) -> "P0Matrix":
        return cls(p, k, tuple([0, p**m] + [0] * (cx - 2))[:cx] if cx > 1 else (0,), cx)

    @classmethod
    def specialized(cls, p: int, k: int, a_p: PadicScalar) -> "P0Matrix":
        return cls(p, k, (a_p.lift(),), 1)

    def poly_rows(self):
        z = [0] * self.cx
        one = [1] + [0] * (self.cx - 1)
        pk = [self.p ** (self.k - 1)] + [0] * (self.cx - 1)
        return [[z, [-c for c in one]], [pk, list(self.slot)]]

    def det(self) -> int:
        return self.p ** (self.k - 1)


def _solve_matrix(P0: P0Matrix, ell: int, mod: int):
    """The 4x4 matrix of H -> H - p^(ell-k) P0 H adj(P0) in the basis (h11, h12, h21, h22)."""
    cx = P0.cx
    rows = P0.poly_rows()
    (a, b), (c, d) = rows
    adj = [[d, [-x for x in b]], [[-x for x in c], a]]
    scale = P0.p ** (ell - P0.k)
    cols = []
    for idx in range(4):
        E = [[[0] * cx, [0] * cx], [[0] * cx, [0] * cx]]
        E[idx // 2][idx % 2] = [1] + [0] * (cx - 1)
        PE = _pmat_mul(rows, E, cx, mod)
        PEA = _pmat_mul(PE, adj, cx, mod)
        out = []
        for i in range(2):
            for j in range(2):
                out.append([(e - scale * t) % mod for e, t in zip(E[i][j], PEA[i][j])])
        cols.append(out)
    return [[cols[j][i] for j in range(4)] for i in range(4)]


@dataclass(frozen=True)
class SolveOperator:
    """L(H) = H - p^(ell-1) P0 H P0^(-1) on M(2, Z_p[X]/(X^cx)), inverted mod p^digits."""

    P0: P0Matrix
    ell: int
    digits: int
    matrix: tuple
    inverse: tuple

    def reduction_mod_pX(self):
        """L modulo (p, X) as a 4x4 matrix over F_p."""
        p = self.P0.p
        return [[e[0] % p for e in row] for row in self.matrix]

    def det_is_unit(self) -> bool:
        return _inverse_mod_p(self.reduction_mod_pX(), self.P0.p) is not None

    def apply(self, vec):
        mod = ppow(self.P0.p, self.digits)
        col = [[v] for v in vec]
        return [r[0] for r in _pmat_mul(self.matrix, col, self.P0.cx, mod)]

    def solve(self, rhs):
        """H with L(H) = rhs, as four X-polynomials mod p^digits."""
        mod = ppow(self.P0.p, self.digits)
        col = [[v] for v in rhs]
        return [r[0] for r in _pmat_mul(self.inverse, col, self.P0.cx, mod)]


UNIPOTENT = [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


@lru_cache(maxsize=4096)
def solve_operator(P0: P0Matrix, ell: int, digits: int) -> SolveOperator:
    """Build L for level ``ell`` and lift the mod-(p, X) inverse of L by Newton iteration."""
    if ell < P0.k:
        raise ValueError("the solve operator is defined for ell >= k")
    p, cx = P0.p, P0.cx
    digits = max(int(digits), 1)
    mod = ppow(p, digits)
    L = _solve_matrix(P0, ell, mod)
    inv0 = _inverse_mod_p([[e[0] for e in row] for row in L], p)
    if inv0 is None:
        raise LiftError(f"solve operator at level {ell} is not invertible mod (p, X)")
    M = [[[x] + [0] * (cx - 1) for x in row] for row in inv0]
    ident = [[[int(i == j)] + [0] * (cx - 1) for j in range(4)] for i in range(4)]
    for _ in range(64):
        LM = _pmat_mul(L, M, cx, mod)
        E = [[[(u - v) % mod for u, v in zip(ident[i][j], LM[i][j])] for j in range(4)]
             for i in range(4)]
        if not any(any(e) for row in E for e in row):
            break
        ME = _pmat_mul(M, E, cx, mod)
        M = [[[(u + v) % mod for u, v in zip(M[i][j], ME[i][j])] for j in range(4)]
             for i in range(4)]
    else:
        raise LiftError("Newton iteration for the solve operator did not converge")
    freeze = lambda A: tuple(tuple(tuple(e) for e in row) for row in A)
    return SolveOperator(P0, ell, digits, freeze(L), freeze(M))


# -- building blocks ---------------------------------------------------------

def x_series(profile: PrecisionProfile) -> FamilySeries:
    """The variable X as a constant-in-pi family series."""
    return FamilySeries.from_ints(profile, [[0, 1]])


def build_P(profile: PrecisionProfile, k: int, z: PiSeries, alpha=None) -> Mat2:
    """P = [[0, -1], [q^(k-1), X z]]; with ``alpha`` the slot is alpha*z over Z_p[[pi]]."""
    q = q_series(profile)
    if alpha is None:
        kind = FamilySeries
        slot = x_series(profile) * z.rebase(profile)
        qk = (q ** (k - 1)).as_family()
    else:
        kind = PiSeries
        slot = z.rebase(profile).scale(alpha)
        qk = q ** (k - 1)
    return Mat2(kind.zero(profile), -kind.one(profile), qk, slot)


def seed_G(lams: LambdaPair, gamma: GammaElement, k: int) -> Mat2:
    """diag((lambda_+/gamma(lambda_+))^(k-1), (lambda_-/gamma(lambda_-))^(k-1))."""
    rp = ratio_gamma(lams.lambda_plus, gamma) ** (k - 1)
    rm = ratio_gamma(lams.lambda_minus, gamma) ** (k - 1)
    return Mat2.diag(rp, rm)


def residual(P: Mat2, G: Mat2, gamma: GammaElement) -> Mat2:
    """S = P phi(G) - G gamma(P)."""
    return P @ G.frobenius() - G @ P.gamma_act(gamma)


def normalized_residual(P: Mat2, G: Mat2, gamma: GammaElement, k: int) -> Mat2:
    """T = G - P phi(G) gamma(P)^(-1) = -S adj(gamma(P)) / gamma(q)^(k-1), checked integral."""
    S = residual(P, G, gamma)
    gP = P.gamma_act(gamma)
    inv = invert_unit(gP.c)
    T = -(S @ gP.adj()).scale(inv)
    if not T.is_integral():
        raise IntegralityError("normalized residual is not integral")
    return T


@dataclass(frozen=True)
class LiftRecord:
    ell: int
    digits: int
    residual_order: int
    det_unit: bool
    unipotent: bool | None
    H_zero: bool
    increment_order: int  # pi-order of G^(ell) - G^(ell-1)


def _slice(T: Mat2, j: int):
    """The pi^j coefficient of T as four integer X-polynomials and their common precision."""
    out, prec = [], INF
    for e in T.entries():
        prec = min(prec, e.prec[j])
        row = []
        for x in range(e.nx):
            c = e.coeff(j, x)
            if c.unit and c.valuation < 0:
                raise IntegralityError(f"residual coefficient at pi^{j} is not integral")
            row.append(c.lift() if c.unit else 0)
        out.append(row)
    return out, prec


def _constant_mat(kind, profile, polys, digits) -> Mat2:
    prec = np.full(profile.cap_pi, INF)
    prec[0] = digits
    ents = [kind.from_ints(profile, [list(pl) if kind is FamilySeries else pl[0]], prec)
            for pl in polys]
    return Mat2(*ents)


def _step_matrix(P: Mat2, gamma: GammaElement, k: int) -> Mat2:
    """B = (q/gamma(q))^(k-1) adj(gamma(P)); the level-ell correction is q^(ell-k) B."""
    e = q_over_gamma_q(P.profile, gamma) ** (k - 1)
    return P.gamma_act(gamma).adj().scale(e)


def _p0_of(P: Mat2, k: int) -> tuple[P0Matrix, float]:
    """P mod pi read as a P0Matrix, with the precision of its slot."""
    d = P.d
    cx = d.nx
    slot = tuple(d.coeff(0, x).lift() if d.coeff(0, x).unit else 0 for x in range(cx))
    P0 = P0Matrix(P.profile.p, k, slot, cx)
    return P0, d.prec[0]


def lift_iter(P: Mat2, G: Mat2, gamma: GammaElement, k: int,
              T: Mat2 | None = None) -> Iterator[tuple[Mat2, LiftRecord]]:
    """Yield G^(ell) for ell = k, ..., cap_pi starting from a G with T = 0 mod pi^(k-1).

    The normalized residual is updated incrementally:
    T(G + pi^(ell-1) H) = T(G) + pi^(ell-1) (H - P H q^(ell-k) B).
    """
    profile = P.profile
    n = profile.cap_pi
    kind = type(P.d)
    if T is None:
        T = normalized_residual(P, G, gamma, k)
    if T.pi_order() < k - 1:
        raise LiftError(f"starting residual has pi-order {T.pi_order()} < k-1")
    P0, slot_prec = _p0_of(P, k)
    q = q_series(profile)
    C = _step_matrix(P, gamma, k)
    for ell in range(k, n + 1):
        R, digits = _slice(T, ell - 1)
        digits = min(digits, slot_prec, profile.work)
        if digits <= 0:
            raise PrecisionError(f"no digits left at level {ell}")
        op = solve_operator(P0, ell, int(digits))
        det_unit = op.det_is_unit()
        unip = op.reduction_mod_pX() == UNIPOTENT if ell == k else None
        mod = ppow(profile.p, op.digits)
        rhs = [[(-c) % mod for c in r] for r in R]
        h = op.solve(rhs)
        Hc = _constant_mat(kind, profile, h, op.digits)
        G_prev, G = G, G + Hc.map(lambda e: e.shift_pi(ell - 1))
        U = Hc - (P @ Hc) @ C
        T = T + U.map(lambda e: e.shift_pi(ell - 1))
        if ell < n:
            C = C.scale(q)
        order = T.pi_order()
        if order < ell:
            raise LiftError(f"residual not cleared at level {ell} (order {order})")
        yield G, LiftRecord(ell, op.digits, order, det_unit, unip,
                            not any(any(x) for x in h), (G - G_prev).pi_order())


def lift_step(P: Mat2, G_prev: Mat2, ell: int, gamma: GammaElement, k: int) -> Mat2:
    """One step of the recurrence computed from scratch: returns G_prev + pi^(ell-1) H."""
    T = normalized_residual(P, G_prev, gamma, k)
    if T.pi_order() < ell - 1:
        raise LiftError(f"residual has pi-order {T.pi_order()} < {ell - 1}")
    profile = P.profile
    P0, slot_prec = _p0_of(P, k)
    R, digits = _slice(T, ell - 1)
    digits = min(digits, slot_prec, profile.work)
    op = solve_operator(P0, ell, int(digits))
    mod = ppow(profile.p, op.digits)
    h = op.solve([[(-c) % mod for c in r] for r in R])
    Hc = _constant_mat(type(P.d), profile, h, op.digits)
    return G_prev + Hc.map(lambda e: e.shift_pi(ell - 1))


def lift_full(P: Mat2, seed: Mat2, gamma: GammaElement, k: int,
              history: list | None = None) -> Mat2:
    """Run the recurrence to ell = cap_pi (no early exit)."""
    if P.profile.cap_pi < k:
        raise ValueError("cap_pi must be >= k")
    G = seed
    for G, rec in lift_iter(P, seed, gamma, k):
        if history is not None:
            history.append(rec)
        if not rec.det_unit:
            raise LiftError(f"solve operator at level {rec.ell} has non-unit determinant")
        if rec.unipotent is False:
            raise LiftError("solve operator at level k is not the expected unipotent map")
    kind = type(P.d)
    return G.map(lambda e: e.as_family()) if kind is FamilySeries else G


def newton_polygon(points) -> list:
    """Slopes of the lower convex hull of (i, v_i), left to right (inf values skipped)."""
    pts = sorted((i, v) for i, v in points if v != INF)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = (y2 - y1) / (x2 - x1)
        slopes += [s] * (x2 - x1)
    return slopes


def frobenius_slopes(k: int, v_ap) -> list:
    """p-adic valuations of the roots of T^2 - a_p T + p^(k-1), by the Newton polygon."""
    # coefficients of T^0, T^1, T^2
    return sorted(-s for s in newton_polygon([(0, k - 1), (1, v_ap), (2, 0)]))


# -- the family --------------------------------------------------------------

@dataclass
class WachFamily:
    profile: PrecisionProfile
    k: int
    m: int
    z: PiSeries
    P: Mat2
    G: dict = field(default_factory=dict)
    history: dict = field(default_factory=dict, compare=False)

    @property
    def p(self) -> int:
        return self.profile.p

    def gammas(self) -> list[GammaElement]:
        return sorted(self.G, key=lambda g: g.chi)

    def to_json(self) -> dict:
        return {
            "format": "wachfam/family-v1",
            "profile": self.profile.to_json(),
            "p": self.p, "k": self.k, "m": self.m,
            "z": self.z.to_json(),
            "P": self.P.to_json(),
            "G": {g.key: self.G[g].to_json() for g in self.gammas()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, d: dict) -> "WachFamily":
        if d.get("format") != "wachfam/family-v1":
            raise ValueError("not a family document")
        profile = PrecisionProfile.from_json(d["profile"])
        p, k, m = int(d["p"]), int(d["k"]), int(d["m"])
        if p != profile.p:
            raise ValueError("prime in header and profile disagree")
        z = series_from_json(profile, d["z"])
        P = Mat2.from_json(profile, d["P"])
        G = {GammaElement(int(key), p): Mat2.from_json(profile, v) for key, v in d["G"].items()}
        return cls(profile, k, m, z, P, G)

    @classmethod
    def loads(cls, text: str) -> "WachFamily":
        return cls.from_json(json.loads(text))


def default_chis(p: int) -> list[int]:
    """The primitive root mod p^2, 1+p, and their product (so one cocycle pair is stored)."""
    g = GammaElement.default_generator(p).chi
    return [g, 1 + p, g * (1 + p)]


def check_seed_shape(P: Mat2, seed: Mat2, gamma: GammaElement, k: int) -> bool:
    """Seed residual is [[0, 0], [0, pi^(k-1) *]] with * integral."""
    S = residual(P, seed, gamma)
    return (S.a.is_exact_zero() and S.b.is_zero() and S.c.is_zero()
            and S.d.pi_order() >= k - 1 and S.d.is_integral())


def build_family(profile: PrecisionProfile, k: int, m: int | None = None,
                 chis=None, lams: LambdaPair | None = None,
                 cache_dir=None) -> WachFamily:
    """Build P(X) and G_gamma(X) for each chi (default: primitive root mod p^2 and 1+p)."""
    p = profile.p
    if k < 2:
        raise ValueError("k must be >= 2")
    if profile.cap_pi < k:
        raise ValueError(f"cap_pi={profile.cap_pi} must be >= k={k}")
    m = floor_m(k, p) if m is None else m
    lams = (lams or lambda_pair(profile, cache_dir=cache_dir)).rebase(profile)
    zd = compute_z(profile, k, m, lams)
    if zd is None:
        raise IntegralityError(f"z is not integral for k={k}, m={m}")
    P = build_P(profile, k, zd.z)
    fam = WachFamily(profile, k, m, zd.z, P)
    for chi in (default_chis(p) if chis is None else chis):
        add_gamma(fam, chi, lams)
    return fam


def add_gamma(family: WachFamily, chi: int, lams: LambdaPair | None = None) -> Mat2:
    """Lift G for one more generator and store it."""
    gamma = GammaElement(int(chi), family.p)
    if gamma not in family.G:
        lams = (lams or lambda_pair(family.profile)).rebase(family.profile)
        seed = seed_G(lams, gamma, family.k)
        if not check_seed_shape(family.P, seed, gamma, family.k):
            raise LiftError(f"seed residual for chi={gamma.chi} has the wrong shape",
                            claim="lemma3.2")
        hist: list = []
        family.G[gamma] = lift_full(family.P, seed, gamma, family.k, history=hist)
        family.history[gamma] = hist
    return family.G[gamma]


def commutes(P: Mat2, G: Mat2, gamma: GammaElement) -> bool:
    """P phi(G) == G gamma(P) at the tracked precision."""
    return residual(P, G, gamma).is_zero()


def check_cocycle(family: WachFamily, gamma: GammaElement, eta: GammaElement,
                  alpha=None) -> bool:
    """G_{gamma eta} == G_gamma gamma(G_eta), optionally after X := alpha."""
    G = family.G
    prod = gamma * eta
    for g in (gamma, eta, prod):
        if g not in G and g.chi != 1:
            raise KeyError(f"no stored matrix for chi={g.chi}")
    get = lambda g: G[g] if g in G else Mat2.identity(family.profile, FamilySeries)
    A, B, C = get(prod), get(gamma), get(eta)
    if alpha is not None:
        A, B, C = (M.evaluate_X(alpha) for M in (A, B, C))
    return (A - B @ C.gamma_act(gamma)).is_zero()


def stored_pairs(family: WachFamily) -> list[tuple[GammaElement, GammaElement]]:
    """Ordered pairs of stored generators whose product is stored as well."""
    gs = family.gammas()
    return [(g, h) for g in gs for h in gs if g * h in family.G]


def check_uniqueness(family: WachFamily, gamma: GammaElement, perturbation: Mat2) -> bool:
    """True iff G_gamma + perturbation fails P phi(G) = G gamma(P)."""
    if perturbation.pi_order() < 1:
        raise ValueError("perturbation must vanish mod pi")
    return not commutes(family.P, family.G[gamma] + perturbation.as_family(), gamma)


def det_invariant(family: WachFamily, gamma: GammaElement,
                  lams: LambdaPair | None = None) -> bool:
    """det G_gamma is X-free and equals ((lambda_+ lambda_-)/gamma(lambda_+ lambda_-))^(k-1)."""
    lams = (lams or lambda_pair(family.profile)).rebase(family.profile)
    d = family.G[gamma].det()
    x_free = all(d.x_part(x).is_zero() for x in range(1, d.nx))
    target = ratio_gamma(lams.lambda_plus * lams.lambda_minus, gamma) ** (family.k - 1)
    return x_free and (d.x_part(0) - target).is_zero()
