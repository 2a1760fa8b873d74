"""Command-line front end.

Exit codes: 0 when every certificate passes, 1 when a mathematical check
fails, 2 for configuration or parse errors.  Defaults for the common
options can be set through environment variables prefixed ``WACHFAM_``
(``WACHFAM_P``, ``WACHFAM_CAP_P``, ``WACHFAM_CAP_PI``, ``WACHFAM_CAP_X``,
``WACHFAM_FORMAT``, ``WACHFAM_CACHE_DIR``, ``WACHFAM_JOBS``); explicit
flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .lab import (breuil_bound_table, classify_reduction_label, corollary_bound, dcris,
                  default_alphas, fil_basis, lambda_certificates, run_suites, specialize)
from .lambdas import compute_z, floor_m, lambda_pair, minimal_m
from .padic import PadicScalar, PrecisionProfile
from .wach import WachFamily, build_family, default_chis

ENV_PREFIX = "WACHFAM_"
EXIT_OK, EXIT_MATH, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    """Invalid command-line or file input."""


@dataclass
class RunConfig:
    p: int = 3
    k: int | None = None
    k_max: int | None = None
    m: int | None = None
    cap_p: int = 12
    cap_pi: int = 60
    cap_X: int = 5
    chis: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    fmt: str = "text"
    cache_dir: str | None = None
    jobs: int = 1

    def profile(self) -> PrecisionProfile:
        try:
            return PrecisionProfile(self.p, self.cap_p, self.cap_pi, self.cap_X)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def require_k(self) -> int:
        if self.k is None:
            raise ConfigError("--k is required")
        if self.k < 2:
            raise ConfigError("k must be >= 2")
        if self.cap_pi < self.k:
            raise ConfigError(f"cap_pi={self.cap_pi} must be >= k={self.k}")
        return self.k

    def alpha_scalars(self) -> list[PadicScalar]:
        out = []
        for text in self.alphas:
            try:
                a = PadicScalar.parse(text, self.p)
            except ValueError as exc:
                raise ConfigError(f"cannot parse alpha {text!r}: {exc}") from None
            if a.val() < 1:
                raise ConfigError(f"alpha {text!r} is not in pZ_p")
            out.append(a)
        return out


def _env(name, cast, default):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"bad value for {ENV_PREFIX}{name}: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--k-max", type=int)
    common.add_argument("--m", type=int, help="denominator exponent (default floor((k-2)/(p-1)))")
    common.add_argument("--cap-p", type=int)
    common.add_argument("--cap-pi", type=int)
    common.add_argument("--cap-x", type=int)
    common.add_argument("--chi", type=int, action="append", default=[],
                        help="chi(gamma) value, repeatable")
    common.add_argument("--alpha", action="append", default=[],
                        help="specialization point as 'u*p^v', repeatable")
    common.add_argument("--format", choices=["json", "text"])
    common.add_argument("--cache-dir")
    common.add_argument("--jobs", type=int)
    common.add_argument("--out", help="output file for build")

    ap = argparse.ArgumentParser(prog="wachfam", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("lambda", parents=[common], help="compute lambda_+ and lambda_- and check them")
    sub.add_parser("build", parents=[common], help="build a family and write it as JSON")
    for name, text in (("verify", "run the certificate suites on a family file"),
                       ("specialize", "evaluate a family at alpha"),
                       ("fil", "filtration bases of a specialized family")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("family", help="family JSON file")
        if name == "fil":
            sp.add_argument("--i-max", type=int)
    sub.add_parser("reduce", parents=[common], help="reduction labels and congruence bounds")
    sub.add_parser("scan", parents=[common], help="bound table over a range of k")
    sub.add_parser("selftest", parents=[common], help="small end-to-end run")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    pick = lambda v, name, cast, default: v if v is not None else _env(name, cast, default)
    return RunConfig(
        p=pick(ns.p, "P", int, 3),
        k=ns.k,
        k_max=ns.k_max,
        m=ns.m,
        cap_p=pick(ns.cap_p, "CAP_P", int, 12),
        cap_pi=pick(ns.cap_pi, "CAP_PI", int, 60),
        cap_X=pick(ns.cap_x, "CAP_X", int, 5),
        chis=list(ns.chi),
        alphas=list(ns.alpha),
        fmt=pick(ns.format, "FORMAT", str, "text"),
        cache_dir=pick(ns.cache_dir, "CACHE_DIR", str, None),
        jobs=max(1, pick(ns.jobs, "JOBS", int, 1)),
    )


# -- commands ----------------------------------------------------------------

def _cert_rows(certs) -> list[dict]:
    return [{"claim": c.claim, "subject": c.subject, "passed": c.passed, "detail": c.detail}
            for c in certs]


def cmd_lambda(cfg: RunConfig) -> tuple[dict, bool]:
    profile = cfg.profile()
    lams = lambda_pair(profile, cache_dir=cfg.cache_dir)
    certs = lambda_certificates(profile, cfg.chis or None, lams)
    ok = all(c.passed for c in certs)
    return {"command": "lambda", "profile": profile.to_json(),
            "factors_used": lams.factors_used, "certificates": _cert_rows(certs)}, ok


def _load_family(path) -> WachFamily:
    try:
        return WachFamily.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"no such file: {path}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"cannot parse family file {path}: {exc}") from None


def cmd_build(cfg: RunConfig, out: str | None) -> tuple[dict, bool]:
    k = cfg.require_k()
    profile = cfg.profile()
    lams = lambda_pair(profile, cache_dir=cfg.cache_dir)
    m = floor_m(k, cfg.p) if cfg.m is None else cfg.m
    if m < 0:
        raise ConfigError("m must be >= 0")
    if compute_z(profile, k, m, lams) is None:
        return {"command": "build", "claim": "prop3.1.4",
                "error": f"z is not integral for k={k}, m={m}"}, False
    try:
        fam = build_family(profile, k, m, cfg.chis or default_chis(cfg.p), lams=lams)
    except ArithmeticError as exc:
        return {"command": "build", "claim": getattr(exc, "claim", "prop3.3"),
                "error": f"{type(exc).__name__}: {exc}"}, False
    path = Path(out or f"family-p{cfg.p}-k{k}.json")
    path.write_text(fam.dumps())
    orders = {g.key: fam.history[g][-1].residual_order if fam.history[g] else profile.cap_pi
              for g in fam.gammas()}
    return {"command": "build", "file": str(path), "p": fam.p, "k": k, "m": fam.m,
            "z0": str(fam.z.coeff(0)), "residual_order": orders}, True


def cmd_verify(cfg: RunConfig, path: str) -> tuple[dict, bool]:
    fam = _load_family(path)
    cfg.p = fam.p
    alphas = cfg.alpha_scalars()
    certs = run_suites(fam, alphas, lambda_pair(fam.profile, cache_dir=cfg.cache_dir))
    ok = all(c.passed for c in certs)
    return {"command": "verify", "file": path, "passed": ok,
            "certificates": _cert_rows(certs)}, ok


def cmd_specialize(cfg: RunConfig, path: str) -> tuple[dict, bool]:
    fam = _load_family(path)
    cfg.p = fam.p
    rows = []
    for a in cfg.alpha_scalars() or [PadicScalar.from_int(0, fam.p)]:
        mod = specialize(fam, a)
        D = dcris(mod)
        rows.append({"alpha": str(a), "a_p": str(mod.a_p), "frobenius": D.to_json()["frobenius"],
                     "jumps": list(D.jumps), "slopes": D.slopes(),
                     "G_precision": {g.key: mod.G[g].gauss_precision() for g in fam.gammas()}})
    return {"command": "specialize", "file": path, "modules": rows}, True


def cmd_fil(cfg: RunConfig, path: str, i_max: int | None) -> tuple[dict, bool]:
    fam = _load_family(path)
    cfg.p = fam.p
    top = min(fam.k + 2 if i_max is None else i_max, fam.profile.cap_pi - 1)
    rows = []
    for a in cfg.alpha_scalars() or [PadicScalar.from_int(0, fam.p)]:
        mod = specialize(fam, a)
        for i in range(0, top + 1):
            fb = fil_basis(mod, i)
            rows.append({"alpha": str(a), "i": i, "basis": fb.basis_text,
                         "witnesses_outside": [w for w, member in fb.witnesses if not member]})
    return {"command": "fil", "file": path, "rows": rows}, True


def cmd_reduce(cfg: RunConfig) -> tuple[dict, bool]:
    ks = [cfg.require_k()] if cfg.k_max is None else list(range(2, cfg.k_max + 1))
    rows = []
    for k in ks:
        lab = classify_reduction_label(cfg.p, k)
        rows.append({"k": k, "label": lab.text, "kind": lab.kind,
                     "bound": corollary_bound(cfg.p, k)})
    return {"command": "reduce", "p": cfg.p, "rows": rows}, True


def _scan_row(args):
    profile, k, cache_dir = args
    lams = lambda_pair(profile, cache_dir=cache_dir)
    return {"k": k, "floor_m": floor_m(k, profile.p), "minimal_m": minimal_m(profile, k, lams),
            "bound": corollary_bound(profile.p, k)}


def cmd_scan(cfg: RunConfig) -> tuple[dict, bool]:
    profile = cfg.profile()
    if cfg.k_max is None:
        raise ConfigError("--k-max is required")
    if cfg.k_max > profile.cap_pi + 1:
        raise ConfigError("k-max must be <= cap_pi + 1")
    jobs = [(profile, k, cfg.cache_dir) for k in range(2, cfg.k_max + 1)]
    if cfg.jobs > 1:
        lambda_pair(profile, cache_dir=cfg.cache_dir)
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            rows = list(ex.map(_scan_row, jobs))
    else:
        table = breuil_bound_table(profile, cfg.k_max,
                                   lambda_pair(profile, cache_dir=cfg.cache_dir))
        rows = [r.to_json() for r in table]
    ok = all(r["minimal_m"] <= r["floor_m"] for r in rows)
    return {"command": "scan", "p": cfg.p, "rows": rows}, ok


def cmd_selftest(cfg: RunConfig) -> tuple[dict, bool]:
    profile = PrecisionProfile(3, 10, 40, 4)
    k = 4
    lams = lambda_pair(profile)
    certs = lambda_certificates(profile, lams=lams)
    fam = build_family(profile, k, lams=lams)
    certs += run_suites(fam, default_alphas(3)[:3], lams)
    ok = all(c.passed for c in certs)
    return {"command": "selftest", "profile": profile.to_json(), "k": k, "passed": ok,
            "certificates": _cert_rows(certs)}, ok


# -- output --------------------------------------------------------------------

def _text_lines(obj, prefix="") -> list[str]:
    if isinstance(obj, dict):
        out = []
        for key in sorted(obj):
            out += _text_lines(obj[key], f"{prefix}.{key}" if prefix else str(key))
        return out
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        out = []
        for i, item in enumerate(obj):
            out += _text_lines(item, f"{prefix}[{i}]")
        return out
    if isinstance(obj, list):
        return [f"{prefix}: {' '.join(str(x) for x in obj)}"]
    return [f"{prefix}: {obj}"]


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=1)
    return "\n".join(_text_lines(report))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        cmd = ns.command
        if cmd not in ("verify", "specialize", "fil"):
            cfg.profile()
        if cmd == "lambda":
            report, ok = cmd_lambda(cfg)
        elif cmd == "build":
            report, ok = cmd_build(cfg, ns.out)
        elif cmd == "verify":
            report, ok = cmd_verify(cfg, ns.family)
        elif cmd == "specialize":
            report, ok = cmd_specialize(cfg, ns.family)
        elif cmd == "fil":
            report, ok = cmd_fil(cfg, ns.family, ns.i_max)
        elif cmd == "reduce":
            report, ok = cmd_reduce(cfg)
        elif cmd == "scan":
            report, ok = cmd_scan(cfg)
        else:
            report, ok = cmd_selftest(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"wachfam: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"wachfam: check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    print(render(report, cfg.fmt))
    return EXIT_OK if ok else EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
