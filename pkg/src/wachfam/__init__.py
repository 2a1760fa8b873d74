"""Exact construction of one-parameter families of rank-2 Wach modules."""

from .lab import (FilteredPhiModule, SpecializedWachModule, congruence_check, dcris,
                  fil_basis, run_suites, specialize)
from .lambdas import LambdaPair, compute_z, floor_m, lambda_pair, minimal_m
from .padic import (IntegralityError, PadicScalar, PrecisionError, PrecisionProfile,
                    binomial, valuation)
from .series import (FamilySeries, GammaElement, PiSeries, compose, evaluate_X, frobenius,
                     gamma_act, in_ring_R, invert_unit, reduce_mod_p)
from .wach import LiftError, Mat2, WachFamily, build_family, lift_full

__all__ = [
    "IntegralityError", "PadicScalar", "PrecisionError", "PrecisionProfile", "binomial",
    "valuation", "FamilySeries", "GammaElement", "PiSeries", "compose", "evaluate_X",
    "frobenius", "gamma_act", "in_ring_R", "invert_unit", "reduce_mod_p",
    "LambdaPair", "compute_z", "floor_m", "lambda_pair", "minimal_m",
    "LiftError", "Mat2", "WachFamily", "build_family", "lift_full",
    "FilteredPhiModule", "SpecializedWachModule", "congruence_check", "dcris", "fil_basis",
    "run_suites", "specialize",
]
