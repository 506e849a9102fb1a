"""
A-hypergeometric systems and their series solutions.
"""
from .algebra import NilpotentAlgebra
from .frobenius import (
    FrobeniusResult,
    frobenius_cohomology,
    frobenius_variants,
    frobenius_w0,
    log_shift_check,
    regularization_check,
    series_coefficient,
    support_violations,
)
from .operators import BoxOperator, EulerOperator, XOperator, XTerm
from .scalars import gamma_log_expansion, series_ring
from .series import LogSeries
from .system import (
    AnnihilationReport,
    GkzSystem,
    UniquenessReport,
    a_space_check,
    annihilation_check,
    box_operator_on_x,
    chart_operators,
    exponent_shift,
    gkz_operators,
    gkz_system,
    uniqueness_check,
)

__all__ = [
    "AnnihilationReport",
    "BoxOperator",
    "EulerOperator",
    "FrobeniusResult",
    "GkzSystem",
    "LogSeries",
    "NilpotentAlgebra",
    "UniquenessReport",
    "XOperator",
    "XTerm",
    "a_space_check",
    "annihilation_check",
    "box_operator_on_x",
    "chart_operators",
    "exponent_shift",
    "frobenius_cohomology",
    "frobenius_variants",
    "frobenius_w0",
    "gamma_log_expansion",
    "gkz_operators",
    "gkz_system",
    "log_shift_check",
    "regularization_check",
    "series_coefficient",
    "series_ring",
    "support_violations",
    "uniqueness_check",
]
