#!/usr/bin/env python3
"""Build every family on a (p, k) grid, run the certificate suites and print a summary.

    python scripts/run_grid.py --primes 3 5 --cap-pi 30 --out grid/
"""
import argparse
import sys
import time
from pathlib import Path

from wachfam.lab import default_alphas, lambda_certificates, run_suites
from wachfam.lambdas import lambda_pair
from wachfam.padic import PrecisionProfile
from wachfam.wach import build_family, default_chis


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--cap-p", type=int, default=12)
    ap.add_argument("--cap-pi", type=int, default=60)
    ap.add_argument("--cap-x", type=int, default=5)
    ap.add_argument("--k-max", type=int, help="default 2p+3")
    ap.add_argument("--out", type=Path, help="directory for family JSON files")
    args = ap.parse_args(argv)

    failed = 0
    for p in args.primes:
        prof = PrecisionProfile(p, args.cap_p, args.cap_pi, args.cap_x)
        lams = lambda_pair(prof)
        certs = lambda_certificates(prof, default_chis(p), lams)
        bad = [c for c in certs if not c.passed]
        print(f"p={p} lambda: {len(certs) - len(bad)}/{len(certs)} ok, "
              f"{lams.factors_used} factors")
        failed += len(bad)
        for k in range(2, (args.k_max or 2 * p + 3) + 1):
            t0 = time.perf_counter()
            fam = build_family(prof, k, chis=default_chis(p), lams=lams)
            certs = run_suites(fam, default_alphas(p)[:4], lams)
            bad = [c for c in certs if not c.passed]
            failed += len(bad)
            print(f"p={p} k={k:2d} m={fam.m} certificates {len(certs) - len(bad)}/{len(certs)}"
                  f"  {time.perf_counter() - t0:5.1f}s")
            for c in bad:
                print(f"    FAIL {c.claim} {c.subject}: {c.detail}")
            if args.out:
                args.out.mkdir(parents=True, exist_ok=True)
                (args.out / f"family-p{p}-k{k}.json").write_text(fam.dumps())
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
