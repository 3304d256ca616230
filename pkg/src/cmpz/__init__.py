"""Normalizing constant Z(λ, ν) = Σ λ^j / (j!)^ν of the Conway-Maxwell-Poisson
distribution: exact evaluation, large-λ expansion, moments and cumulants."""

from .asymptotic import (
    COEFFICIENTS,
    AsymEval,
    CoeffPolynomial,
    coeff,
    percent_error,
    percent_errors,
    verify_inverse_factorial,
    z_asymptotic,
)
from .errors import DomainError, ResourceLimitError
from .exact import (
    TruncationReport,
    cumulants_exact,
    log_pmf,
    log_z_exact,
    pmf_window,
    raw_moment_exact,
    z_exact,
)
from .model import CmpParams, CumulantSet, MomentSet
from .moments import (
    bell_partial,
    cumulant_asym,
    cumulants_asym,
    kurtosis_asym,
    kurtosis_exact,
    mean_asym,
    poisson_expectation,
    raw_moment_asym,
    raw_moments_from_cumulants,
    skewness_asym,
    skewness_exact,
    variance_asym,
    verify_poisson_expectation_limit,
)
from .numerics import LogValue, compensated_sum, log_gamma
from .tables import ErrorTable, compute_table, format_cell, preset_table

__version__ = "0.1.0"
