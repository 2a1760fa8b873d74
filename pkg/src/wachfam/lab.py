"""Specialization at alpha, filtrations, the filtered phi-module, and congruence checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .lambdas import LambdaPair, floor_m, lambda_pair, minimal_m, q_series, ratio_gamma
from .padic import PadicScalar, PrecisionError, PrecisionProfile
from .series import FamilySeries, GammaElement, PiSeries, frobenius, invert_unit
from .wach import (LiftError, Mat2, WachFamily, build_P, check_cocycle, commutes,
                   default_chis, det_invariant, newton_polygon, stored_pairs)


class FiltrationError(ArithmeticError):
    """A claimed filtration basis failed its membership test."""


def as_scalar(alpha, p: int) -> PadicScalar:
    if isinstance(alpha, PadicScalar):
        return alpha
    return PadicScalar.from_rational(alpha, p)


def default_alphas(p: int) -> list[PadicScalar]:
    return [PadicScalar.from_int(a, p) for a in (0, p, p * p, p + p * p, (p - 1) * p)]


# -- specialization ----------------------------------------------------------

@dataclass
class SpecializedWachModule:
    profile: PrecisionProfile
    k: int
    m: int
    alpha: PadicScalar
    P: Mat2
    G: dict

    @property
    def p(self) -> int:
        return self.profile.p

    @property
    def a_p(self) -> PadicScalar:
        return PadicScalar.from_int(self.p ** self.m, self.p) * self.alpha


def specialize(family: WachFamily, alpha) -> SpecializedWachModule:
    """Evaluate P and every stored G at X = alpha and revalidate the relations."""
    p = family.p
    alpha = as_scalar(alpha, p)
    if alpha.val() < 1:
        raise ValueError("alpha must lie in pZ_p")
    P = build_P(family.profile, family.k, family.z, alpha)
    if not (P - family.P.evaluate_X(alpha)).is_zero():
        raise LiftError("P(alpha) disagrees with the evaluated family matrix")
    G = {g: M.evaluate_X(alpha) for g, M in family.G.items()}
    for g, M in G.items():
        if not commutes(P, M, g):
            raise LiftError(f"commutation fails at alpha={alpha} for chi={g.chi}")
    for g, h in stored_pairs(family):
        if not (G[g * h] - G[g] @ G[h].gamma_act(g)).is_zero():
            raise LiftError(f"cocycle fails at alpha={alpha} for chi={g.chi},{h.chi}")
    return SpecializedWachModule(family.profile, family.k, family.m, alpha, P, G)


# -- filtration --------------------------------------------------------------

def _pi_power(profile, e: int) -> PiSeries:
    return PiSeries.one(profile).shift_pi(e)


@lru_cache(maxsize=256)
def _p_over_q(profile: PrecisionProfile, i: int = 1) -> PiSeries:
    """(p/q)^i; p/q is a unit of the growth ring, so dividing by it costs no precision."""
    if i > 1:
        return _p_over_q(profile, i - 1) * _p_over_q(profile, 1)
    return invert_unit(q_series(profile).scale(PadicScalar.from_int(1, profile.p).shift(-1)))


def in_fil(module: SpecializedWachModule, x: tuple, i: int) -> bool:
    """Is phi(x) in q^i N?  x = (x1, x2) are coordinates in the basis (n1, n2).

    phi(x) is divided by q^i = p^i (q/p)^i in Q_p[[pi]] and tested for
    integrality in the pi-degrees where enough digits survive.
    """
    profile = module.profile
    x1, x2 = x
    fx1, fx2 = frobenius(x1), frobenius(x2)
    P = module.P
    y = (P.a * fx1 + P.b * fx2, P.c * fx1 + P.d * fx2)
    if i <= 0:
        return all(c.is_integral() for c in y)
    u = _p_over_q(profile, i)
    inv_pi = PadicScalar.from_int(1, profile.p).shift(-i)
    for c in y:
        w = (c * u).scale(inv_pi)
        if not _integral_in_window(w):
            return False
    return True


def _integral_in_window(w: PiSeries) -> bool:
    """Integrality of the pi-degrees carrying at least one known digit."""
    cut = next((j for j in range(w.n) if w.prec[j] < 1), w.n)
    if cut == 0:
        raise PrecisionError("no decidable pi-degree in the membership test")
    return w.truncate_pi(cut).is_integral()


@dataclass(frozen=True)
class FilBasis:
    i: int
    exponents: tuple  # basis (pi^e1 n1, pi^e2 n2)
    witnesses: tuple  # ((label, exponents or coords), member?) for vectors just outside

    @property
    def basis_text(self) -> str:
        e1, e2 = self.exponents
        mono = lambda e, n: n if e == 0 else f"pi^{e} {n}"
        return f"({mono(e1, 'n1')}, {mono(e2, 'n2')})"

    def reduction_dim(self) -> int:
        """Dimension of the image of Fil^i in N / pi N."""
        return sum(1 for e in self.exponents if e == 0)


def fil_exponents(k: int, i: int) -> tuple[int, int]:
    if i <= 0:
        return (0, 0)
    if i <= k - 1:
        return (0, i)
    return (i - (k - 1), i)


def fil_basis(module: SpecializedWachModule, i: int) -> FilBasis:
    """Basis of Fil^i N, verified by membership of the basis and non-membership of witnesses."""
    profile = module.profile
    if not 0 <= i <= profile.cap_pi - 1:
        raise ValueError(f"need 0 <= i <= cap_pi-1, got {i}")
    k = module.k
    e1, e2 = fil_exponents(k, i)
    zero = PiSeries.zero(profile)
    pw = lambda e: _pi_power(profile, e)
    for vec in ((pw(e1), zero), (zero, pw(e2))):
        if not in_fil(module, vec, i):
            raise FiltrationError(f"basis vector fails phi(x) in q^{i} N")
    candidates = []
    if i >= 1:
        candidates.append((f"pi^{e2 - 1} n2", (zero, pw(e2 - 1))))
        candidates.append(("n1 + n2", (pw(0), pw(0))))
    if i >= k:
        candidates.append((f"pi^{e1 - 1} n1", (pw(e1 - 1), zero)))
    witnesses = []
    for label, vec in candidates:
        member = in_fil(module, vec, i)
        if member:
            raise FiltrationError(f"{label} unexpectedly lies in Fil^{i}")
        witnesses.append((label, member))
    return FilBasis(i, (e1, e2), tuple(witnesses))


# -- the filtered phi-module --------------------------------------------------

@dataclass(frozen=True)
class FilteredPhiModule:
    p: int
    frobenius_matrix: tuple  # ((a, b), (c, d)) of PadicScalars
    jumps: tuple

    def det(self) -> PadicScalar:
        (a, b), (c, d) = self.frobenius_matrix
        return a * d - b * c

    def trace(self) -> PadicScalar:
        (a, _), (_, d) = self.frobenius_matrix
        return a + d

    def newton_number(self) -> int:
        return int(self.det().val())

    def hodge_number(self) -> int:
        return sum(self.jumps)

    def balanced(self) -> bool:
        return self.newton_number() == self.hodge_number()

    def slopes(self) -> list:
        """Slopes of Frobenius from the Newton polygon of T^2 - trace T + det."""
        v = lambda s: s.val()
        pts = [(0, v(self.det())), (1, v(self.trace())), (2, 0)]
        return sorted(-s for s in newton_polygon(pts))

    def to_json(self) -> dict:
        return {"frobenius": [[str(e) for e in r] for r in self.frobenius_matrix],
                "jumps": list(self.jumps)}


def dcris(module: SpecializedWachModule) -> FilteredPhiModule:
    """Frobenius = P mod pi; jumps read off where dim Fil^i (N / pi N) drops."""
    p, k = module.p, module.k
    frob = tuple(tuple(e.coeff(0) for e in r) for r in module.P.rows)
    expected = ((0, -1), (p ** (k - 1), None))
    for r in range(2):
        for c in range(2):
            want = expected[r][c] if (r, c) != (1, 1) else module.a_p
            if frob[r][c] != want:
                raise FiltrationError(f"Frobenius entry ({r + 1},{c + 1}) is {frob[r][c]}")
    dims = [fil_basis(module, i).reduction_dim() for i in range(0, k + 1)]
    jumps = []
    for i in range(k):
        jumps += [i] * (dims[i] - dims[i + 1])
    out = FilteredPhiModule(p, frob, tuple(jumps))
    if out.jumps != (0, k - 1):
        raise FiltrationError(f"jumps {out.jumps} differ from (0, {k - 1})")
    if not out.balanced():
        raise FiltrationError("Newton and Hodge numbers differ")
    return out


# -- congruences -------------------------------------------------------------

def _agree_mod(A: Mat2, B: Mat2, i: int) -> bool:
    D = A - B
    if D.gauss_precision() < i:
        raise PrecisionError(f"only {D.gauss_precision()} digits known, {i} needed")
    return D.with_prec(i).is_zero()


def congruence_check(family: WachFamily, alpha1, alpha2, i: int) -> bool:
    """Do P and every stored G agree mod p^i at X = alpha1 and X = alpha2?"""
    if i < 1:
        raise ValueError("i must be positive")
    p = family.p
    a1, a2 = as_scalar(alpha1, p), as_scalar(alpha2, p)
    mats = [family.P] + [family.G[g] for g in family.gammas()]
    return all(_agree_mod(M.evaluate_X(a1), M.evaluate_X(a2), i) for M in mats)


def corollary_bound(p: int, k: int) -> int:
    """v_p(a_p) above this forces the reduction of V_{k,a_p} to equal that of V_{k,0}."""
    if k <= p + 1:
        return 0
    if k <= 2 * p - 1:
        return 1
    if k <= 3 * p - 2:
        return 2
    return floor_m(k, p)


@dataclass(frozen=True)
class BoundRow:
    k: int
    floor_m: int
    minimal_m: int
    bound: int

    def to_json(self) -> dict:
        return {"k": self.k, "floor_m": self.floor_m, "minimal_m": self.minimal_m,
                "bound": self.bound}


def breuil_bound_table(profile: PrecisionProfile, k_max: int,
                       lams: LambdaPair | None = None) -> list[BoundRow]:
    p = profile.p
    if k_max > profile.cap_pi + 1:
        raise ValueError("k_max must be <= cap_pi + 1")
    lams = lams or lambda_pair(profile)
    return [BoundRow(k, floor_m(k, p), minimal_m(profile, k, lams), corollary_bound(p, k))
            for k in range(2, k_max + 1)]


@dataclass(frozen=True)
class ReductionLabel:
    kind: str  # "irreducible" or "split"
    exponent: int
    text: str


def classify_reduction_label(p: int, k: int) -> ReductionLabel:
    """Label of the semisimplified reduction of V_{k,0} (a restatement, not a computation)."""
    if (k - 1) % (p + 1):
        return ReductionLabel("irreducible", k - 1, f"ind(omega2^{k - 1})")
    t = (k - 1) // (p + 1)
    return ReductionLabel("split", t, f"(mu_sqrt(-1) + mu_-sqrt(-1)) x chi^{t}")


# -- certificates --------------------------------------------------------------

CLAIMS = {
    "prop3.1.1": "lambda_+(0) = lambda_-(0) = 1",
    "prop3.1.2": "lambda_pm / gamma(lambda_pm) lies in 1 + pi Z_p[[pi]]",
    "prop3.1.3": "phi(lambda_-) = lambda_+ and phi(lambda_+) q/p = lambda_-",
    "prop3.1.4": "p^m (lambda_-/lambda_+)^(k-1) truncated to degree k-2 is integral",
    "lemma3.2": "P phi(G_seed) - G_seed gamma(P) = [[0, 0], [0, pi^(k-1) *]], * integral",
    "prop3.3": "P phi(G) = G gamma(P) with G in Id + pi M(2, Z_p[[pi, X]])",
    "prop3.3.det": "det G_gamma = ((lambda_+ lambda_-)/gamma(lambda_+ lambda_-))^(k-1), X-free",
    "prop3.4": "G_{gamma eta} = G_gamma gamma(G_eta)",
    "prop3.6": "N/pi N with the induced filtration is D_{k,a_p}",
    "thm4.1": "specialized matrices at alpha and 0 agree mod p",
    "rem4.2": "alpha1 = alpha2 mod p^i implies the specialized matrices agree mod p^i",
}


@dataclass(frozen=True)
class Certificate:
    claim: str
    subject: str
    profile: PrecisionProfile
    passed: bool
    detail: str = ""

    @property
    def statement(self) -> str:
        return CLAIMS[self.claim]

    def to_json(self) -> dict:
        return {"claim": self.claim, "statement": self.statement, "subject": self.subject,
                "profile": self.profile.to_json(), "passed": self.passed,
                "detail": self.detail}


def _run(claim, subject, profile, fn) -> Certificate:
    try:
        ok = bool(fn())
        return Certificate(claim, subject, profile, ok)
    except (ArithmeticError, ValueError, KeyError) as exc:
        return Certificate(claim, subject, profile, False, f"{type(exc).__name__}: {exc}")


def lambda_certificates(profile: PrecisionProfile, chis=None,
                        lams: LambdaPair | None = None) -> list[Certificate]:
    p = profile.p
    lams = lams or lambda_pair(profile)
    lp, lm = lams.lambda_plus, lams.lambda_minus
    q = q_series(profile)
    inv_p = PadicScalar.from_int(1, p).shift(-1)
    certs = [
        _run("prop3.1.1", "lambda", profile, lambda: lp.coeff(0) == 1 and lm.coeff(0) == 1),
        _run("prop3.1.3", "lambda", profile,
             lambda: (frobenius(lm) - lp).is_zero()
             and (frobenius(lp) * q.scale(inv_p) - lm).is_zero()),
    ]
    for chi in (default_chis(p) if chis is None else chis):
        g = GammaElement(int(chi), p)
        certs.append(_run("prop3.1.2", f"chi={g.chi}", profile,
                          lambda g=g: ratio_gamma(lp, g) is not None
                          and ratio_gamma(lm, g) is not None))
    return certs


def run_suites(family: WachFamily, alphas=(), lams: LambdaPair | None = None) -> list[Certificate]:
    """Commutation, cocycle, determinant, filtration, dcris and congruence certificates."""
    profile = family.profile
    p, k = family.p, family.k
    lams = (lams or lambda_pair(profile)).rebase(profile)
    certs = []
    for g in family.gammas():
        G = family.G[g]
        certs.append(_run("prop3.3", f"chi={g.chi}", profile,
                          lambda G=G, g=g: commutes(family.P, G, g) and G.is_integral()
                          and (G - Mat2.identity(profile, FamilySeries)).pi_order() >= 1))
        certs.append(_run("prop3.3.det", f"chi={g.chi}", profile,
                          lambda g=g: det_invariant(family, g, lams)))
    for g, h in stored_pairs(family):
        certs.append(_run("prop3.4", f"chi={g.chi},{h.chi}", profile,
                          lambda g=g, h=h: check_cocycle(family, g, h)))
    zero = PadicScalar.from_int(0, p)
    for a in alphas:
        a = as_scalar(a, p)
        subj = f"alpha={a}"

        def fil_suite(a=a):
            mod = specialize(family, a)
            top = min(k + 2, profile.cap_pi - 1)
            for i in range(0, top + 1):
                fil_basis(mod, i)
            D = dcris(mod)
            return D.jumps == (0, k - 1) and D.balanced()

        certs.append(_run("prop3.6", subj, profile, fil_suite))
        for g, h in stored_pairs(family):
            certs.append(_run("prop3.4", f"{subj} chi={g.chi},{h.chi}", profile,
                              lambda g=g, h=h, a=a: check_cocycle(family, g, h, alpha=a)))
        certs.append(_run("thm4.1", subj, profile,
                          lambda a=a: congruence_check(family, a, zero, 1)))
    return certs
