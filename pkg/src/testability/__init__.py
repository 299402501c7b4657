"""Minimax testability of composite hypotheses on finite sample spaces.

The minimax risk of testing ``P`` against ``Q`` equals one minus the total
variation distance between their convex hulls.  This package computes both
sides with an exact-arithmetic simplex solver, certifies optimal tests with
closest pairs, and builds e-variables and effective-null membership checks
on top of the same linear programs.
"""
from ._kernel import BACKEND as KERNEL_BACKEND
from .effnull import (
    EVariable,
    SubProbability,
    hull_membership_equiv,
    in_effective_null_dom,
    in_effective_null_polar,
    is_e_variable,
    make_powered_e_variable,
)
from .errors import TestabilityError
from .experiments import refinement_sweep, run_example
from .hypotheses import (
    Generators,
    HypothesisSet,
    LinearConstraint,
    Polytope,
    contains,
    mean_at_least,
    mean_at_most,
    support_value,
    symmetric_null,
    tv_ball,
    validate,
)
from .measures import Pmf, SampleSpace, SignedMeasure, TestFn, expectation, mix, risk_of_test, tv_distance, tv_witness_test
from .minimax import (
    RiskReport,
    check_saddle_certificate,
    closest_pair,
    minimax_risk,
    verify_strong_duality,
    worst_case_level,
    worst_case_power,
)

__version__ = "0.1.0"
