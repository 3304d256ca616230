"""Summary statistics: large-λ formulas, exact counterparts, and conversions.

The large-λ formulas are series in α^{-1} with α = λ^{1/ν}; each keeps the
terms through α^{-3} relative to its leading power (through α^{-2} for raw
moments of general order).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import DomainError
from .exact import cumulants_exact
from .model import ASYMPTOTIC, CmpParams, CumulantSet, MomentSet
from .numerics import HALF_LOG_2PI, compensated_sum, log_gamma

MAX_BELL_ORDER = 10

# relative powers of α^{-1} kept by the cumulant formulas
CUMULANT_TERMS = 4


def _alpha(params):
    params.require_positive_nu()
    return params.lam ** (1.0 / params.nu)


def mean_asym(params: CmpParams, terms: int = 4) -> float:
    """E[X] from the first ``terms`` (1..4) terms of its expansion.

    Two terms give the familiar α - (ν-1)/(2ν).
    """
    if not 1 <= terms <= 4:
        raise DomainError(f"terms must be in 1..4, got {terms!r}")
    a = _alpha(params)
    nu = params.nu
    d = nu * nu - 1
    rel = (1.0, -(nu - 1) / (2 * nu) / a, -d / (24 * nu * nu) / a**2, -d / (24 * nu**3) / a**3)
    return a * math.fsum(rel[:terms])


def cumulant_asym(params: CmpParams, n: int) -> float:
    """κ_n for n ≥ 2; κ_1 is :func:`mean_asym`."""
    if n < 2 or int(n) != n:
        raise DomainError(f"cumulant order must be an integer >= 2, got {n!r}")
    a = _alpha(params)
    nu = params.nu
    d = nu * nu - 1
    corr = (-1) ** n * d / (24 * nu * nu) / a**2 + (-2) ** n * d / (48 * nu**3) / a**3
    return a / nu ** (n - 1) * (1.0 + corr)


def variance_asym(params: CmpParams) -> float:
    return cumulant_asym(params, 2)


def skewness_asym(params: CmpParams) -> float:
    a = _alpha(params)
    nu = params.nu
    d = nu * nu - 1
    corr = -5 * d / (48 * nu * nu) / a**2 - 7 * d / (24 * nu**3) / a**3
    return (1.0 + corr) / math.sqrt(nu * a)


def kurtosis_asym(params: CmpParams) -> float:
    """Excess kurtosis κ₄/κ₂²."""
    a = _alpha(params)
    nu = params.nu
    d = nu * nu - 1
    corr = -d / (24 * nu * nu) / a**2 + d / (6 * nu**3) / a**3
    return (1.0 + corr) / (nu * a)


def skewness_exact(params: CmpParams, rel_tol: float = 1e-14) -> float:
    k = cumulants_exact(params, 3, rel_tol)
    return k[3] / k[2] ** 1.5


def kurtosis_exact(params: CmpParams, rel_tol: float = 1e-14) -> float:
    k = cumulants_exact(params, 4, rel_tol)
    return k[4] / k[2] ** 2


def raw_moment_coefficient_a2(n: int, nu: float) -> float:
    """Coefficient of α^{-2} in μ′_n / α^n."""
    first = -n * (nu - 1) * (6 * n * n - 3 * n * nu - 15 * n + 4 * nu + 10) / (24 * nu * nu)
    return first + (math.comb(n, 3) + 3 * math.comb(n, 4)) / (nu * nu)


def raw_moment_asym(params: CmpParams, n: int) -> float:
    if n < 1 or int(n) != n:
        raise DomainError(f"moment order must be an integer >= 1, got {n!r}")
    a = _alpha(params)
    nu = params.nu
    a1 = n * (n - nu) / (2 * nu)
    return a**n * math.fsum((1.0, a1 / a, raw_moment_coefficient_a2(n, nu) / a**2))


def cumulants_asym(params: CmpParams, n_max: int) -> CumulantSet:
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max!r}")
    values = [mean_asym(params)] + [cumulant_asym(params, n) for n in range(2, n_max + 1)]
    return CumulantSet(values, ASYMPTOTIC, CUMULANT_TERMS)


def bell_partial(n: int, k: int, x: Sequence):
    """Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}).

    Works in whatever arithmetic the entries of ``x`` use, so integer or
    Fraction inputs give exact results.
    """
    if not (1 <= k <= n <= MAX_BELL_ORDER):
        raise DomainError(f"need 1 <= k <= n <= {MAX_BELL_ORDER}, got n={n}, k={k}")
    if len(x) < n - k + 1:
        raise DomainError(f"B_{{{n},{k}}} needs {n - k + 1} arguments, got {len(x)}")
    # table[m][j] = B_{m,j}; only entries with m - j <= n - k feed into B_{n,k}
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for m in range(1, n + 1):
        for j in range(max(1, m - (n - k)), min(m, k) + 1):
            acc = 0
            for i in range(1, m - j + 2):
                acc += math.comb(m - 1, i - 1) * x[i - 1] * table[m - i][j - 1]
            table[m][j] = acc
    return table[n][k]


def _moments_from(kappa, n):
    return [sum(bell_partial(m, k, kappa) for k in range(1, m + 1)) for m in range(1, n + 1)]


def raw_moments_from_cumulants(cumulants: CumulantSet) -> MomentSet:
    """Raw moments μ′₁…μ′ₙ and central moments μ₂…μₙ from κ₁…κₙ."""
    kappa = list(cumulants.values)
    n = len(kappa)
    if not 1 <= n <= MAX_BELL_ORDER:
        raise DomainError(f"between 1 and {MAX_BELL_ORDER} cumulants are supported, got {n}")
    raw = _moments_from(kappa, n)
    central = _moments_from([0.0] + kappa[1:], n)[1:]
    return MomentSet(raw, central, cumulants.provenance)


def _log_poisson_power_sum(alpha, nu):
    """ln Σ_j Po_α(j)^ν, by summation outward from the Poisson mode."""
    m = int(math.floor(alpha))
    log_mode = m * math.log(alpha) - alpha - log_gamma(m + 1.0)
    tol = 2.0**-60 / 4
    terms = [1.0]
    running = 1.0
    t, j = 1.0, m
    while j > 0:
        q = (j / alpha) ** nu
        if q < 1 and t * q / (1 - q) <= tol * running:
            break
        t *= q
        j -= 1
        terms.append(t)
        running += t
    t, j = 1.0, m
    while True:
        r = (alpha / (j + 1)) ** nu
        if r < 1 and t * r / (1 - r) <= tol * running:
            break
        t *= r
        j += 1
        terms.append(t)
        running += t
    return nu * log_mode + math.log(compensated_sum(terms))


def poisson_expectation(alpha: float, nu: float) -> float:
    """E[f_α(X)] for X ~ Poisson(α), f_α(j) = (Po_α(j) √(2πα))^{ν-1}.

    Tends to ν^{-1/2} as α grows.
    """
    if not (math.isfinite(nu) and nu > 0):
        raise DomainError(f"nu must be finite and > 0, got {nu!r}")
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be finite and > 0, got {alpha!r}")
    log_scale = (nu - 1) * (HALF_LOG_2PI + 0.5 * math.log(alpha))
    return math.exp(log_scale + _log_poisson_power_sum(alpha, nu))


def poisson_expectation_deviations(nu: float, alphas: Sequence[float]):
    return [abs(poisson_expectation(a, nu) - nu**-0.5) for a in alphas]


def verify_poisson_expectation_limit(nu: float, alphas: Sequence[float]) -> float:
    """Log-log slope of |E[f_α(X)] - ν^{-1/2}| against α.

    At ν = 1 the deviation vanishes identically and ``-inf`` is returned.
    """
    if not (math.isfinite(nu) and nu > 0):
        raise DomainError(f"nu must be finite and > 0, got {nu!r}")
    alphas = [float(a) for a in alphas]
    if len(alphas) < 2:
        raise DomainError("at least two alphas are needed for a slope")
    if any(a < 5 for a in alphas) or any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise DomainError("alphas must be increasing and each >= 5")
    if nu == 1:
        return -math.inf
    dev = poisson_expectation_deviations(nu, alphas)
    if min(dev) == 0:
        return -math.inf
    return float(np.polyfit(np.log(alphas), np.log(dev), 1)[0])
