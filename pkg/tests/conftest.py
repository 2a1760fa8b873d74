import functools

import pytest
from hypothesis import HealthCheck, settings

from wachfam.lambdas import lambda_pair
from wachfam.padic import PrecisionProfile
from wachfam.wach import build_family, default_chis

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GRID_PRIMES = (3, 5, 7)
GRID_CAPS = dict(cap_p=12, cap_pi=60, cap_X=5)


def grid_profile(p):
    return PrecisionProfile(p, **GRID_CAPS)


def grid_ks(p):
    return list(range(2, 2 * p + 4))


@functools.lru_cache(maxsize=None)
def grid_family(p, k):
    """Families on the reference grid, built once per session."""
    prof = grid_profile(p)
    return build_family(prof, k, chis=default_chis(p), lams=lambda_pair(prof))


SMALL = PrecisionProfile(3, 8, 24, 3)


@functools.lru_cache(maxsize=None)
def small_family(k, p=3, chis=None):
    prof = SMALL if p == 3 else PrecisionProfile(p, 8, 24, 3)
    chis = list(chis) if chis else default_chis(p)
    return build_family(prof, k, chis=chis)


@pytest.fixture(scope="session")
def small():
    return SMALL


ACCEPTANCE = {}


def record(criterion, ok, text):
    ACCEPTANCE[criterion] = (ok, text)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
