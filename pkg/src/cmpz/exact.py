"""Exact evaluation of Z(λ, ν) = Σ λ^j / (j!)^ν and of pmf-weighted sums.

Terms are generated outward from the largest one, each stored relative to
it, so every addend lies in [0, 1] before compensated summation.  Both
tails are closed off with a geometric bound, which is rigorous because
the term ratio is monotone in j on each side of the peak.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from decimal import Decimal, localcontext

import numpy as np

from .errors import DomainError, ResourceLimitError
from .model import EXACT, CmpParams, CumulantSet
from .numerics import (
    EXTENDED_DIGITS,
    LogValue,
    compensated_sum,
    fraction_to_decimal,
    log_factorial_decimal,
)

DEFAULT_MAX_TERMS = 10**7

# Summation always continues until the omitted mass is negligible in double
# precision; the caller's rel_tol only caps it.  The extra terms are few
# because they decay faster than geometrically.
_NEGLIGIBLE = 2.0**-60
MAX_MOMENT_ORDER = 10
MAX_CUMULANT_ORDER = 6



@dataclass(frozen=True)
class TruncationReport:
    terms_used: int
    tail_bound_log: float
    peak_index: int


@dataclass(frozen=True)
class _Window:
    first: int
    terms: np.ndarray  # t_j / t_peak for j = first, first + 1, ...
    log_peak: Decimal
    peak: int
    tail: float  # certified bound on the omitted mass, in units of t_peak

    @property
    def indices(self):
        return np.arange(self.first, self.first + len(self.terms), dtype=np.float64)


def _check_tol(rel_tol):
    if not (0 < rel_tol <= 0.1):
        raise DomainError(f"rel_tol must lie in (0, 0.1], got {rel_tol!r}")


def peak_index(lam: float, nu: float) -> int:
    """Largest j with j^ν ≤ λ (0 when λ < 1), i.e. the index of the biggest term."""
    if nu == 0 or lam < 1:
        return 0
    p = int(math.floor(lam ** (1.0 / nu)))
    while (p + 1) ** nu <= lam:
        p += 1
    while p > 0 and p**nu > lam:
        p -= 1
    return p


def log_term_decimal(params: CmpParams, j: int) -> Decimal:
    """ln(λ^j / (j!)^ν) to about 40 digits, from the exact parameter values."""
    with localcontext() as ctx:
        ctx.prec = EXTENDED_DIGITS
        lam = fraction_to_decimal(params.lam_exact)
        nu = fraction_to_decimal(params.nu_exact)
        out = j * lam.ln()
        if j > 1 and nu != 0:
            out -= nu * log_factorial_decimal(j)
        return +out


def _scan(params, rel_tol, power=0, max_terms=DEFAULT_MAX_TERMS):
    lam, nu = params.lam, params.nu
    if nu > 0 and math.log(lam) / nu > math.log(max_terms) + 1:
        raise ResourceLimitError(
            f"peak index lambda^(1/nu) exceeds the cap of {max_terms} terms", max_terms
        )
    p = peak_index(lam, nu)
    if p > max_terms:
        raise ResourceLimitError(
            f"peak index {p} exceeds the cap of {max_terms} terms", max_terms
        )
    tol = min(rel_tol, _NEGLIGIBLE) / 4  # per tail and per weighting
    log_peak = log_term_decimal(params, p)

    def weight(j):
        return float(j) ** power if power else 1.0

    s0 = 1.0
    sn = weight(p)

    # downward from the peak: t_{j-1}/t_j = j^ν/λ shrinks as j decreases
    lower = array("d")
    lower_tail = 0.0
    t, j = 1.0, p
    while j > 0:
        q = j**nu / lam
        if q < 1:
            b0 = t * q / (1 - q)
            bn = t * weight(j) * q / (1 - q)
            if b0 <= tol * s0 and bn <= tol * sn:
                lower_tail = max(b0, bn)
                break
        t *= q
        j -= 1
        lower.append(t)
        s0 += t
        sn += t * weight(j)
    first = j

    # upward: r_j = λ/(j+1)^ν, and the weighted ratio r_j ((j+1)/j)^n, both decreasing
    upper = array("d")
    upper_tail = 0.0
    t, j = 1.0, p
    budget = max_terms - len(lower) - 1
    while True:
        r = lam / (j + 1) ** nu
        if r < 1 and (power == 0 or j > 0):
            rho = r * ((j + 1) / j) ** power if power else r
            if rho < 1:
                b0 = t * r / (1 - r)
                bn = t * weight(j) * rho / (1 - rho)
                if b0 <= tol * s0 and bn <= tol * sn:
                    upper_tail = max(b0, bn)
                    break
        if len(upper) >= budget:
            raise ResourceLimitError(
                f"tolerance {rel_tol} not reached within {max_terms} terms", max_terms
            )
        t *= r
        j += 1
        upper.append(t)
        s0 += t
        sn += t * weight(j)

    lower.reverse()
    terms = np.concatenate(
        [np.frombuffer(lower, dtype=np.float64), [1.0], np.frombuffer(upper, dtype=np.float64)]
    )
    return _Window(first, terms, log_peak, p, lower_tail + upper_tail)


def _log_z_decimal(params, rel_tol, max_terms):
    with localcontext() as ctx:
        ctx.prec = EXTENDED_DIGITS
        if params.nu == 0:
            log_z = -(1 - fraction_to_decimal(params.lam_exact)).ln()
            return log_z, TruncationReport(0, -math.inf, 0)
        w = _scan(params, rel_tol, max_terms=max_terms)
        s = compensated_sum(w.terms)
        log_z = w.log_peak + Decimal(math.log(s))
        tail_log = float(w.log_peak) + math.log(w.tail) if w.tail > 0 else -math.inf
        return log_z, TruncationReport(len(w.terms), tail_log, w.peak)


def z_exact(params: CmpParams, rel_tol: float = 1e-14, max_terms: int = DEFAULT_MAX_TERMS):
    """Z(λ, ν) with a certified truncation bound.

    Returns ``(LogValue, TruncationReport)``.  ``tail_bound_log`` is the log
    of an upper bound on the omitted part of the series.
    """
    params.require_admissible()
    _check_tol(rel_tol)
    log_z, report = _log_z_decimal(params, rel_tol, max_terms)
    return LogValue.from_log_decimal(log_z), report


def log_z_exact(params: CmpParams, rel_tol: float = 1e-14, max_terms=DEFAULT_MAX_TERMS) -> float:
    params.require_admissible()
    _check_tol(rel_tol)
    return float(_log_z_decimal(params, rel_tol, max_terms)[0])


def log_pmf(params: CmpParams, j: int, rel_tol: float = 1e-14, max_terms=DEFAULT_MAX_TERMS) -> float:
    if j < 0 or int(j) != j:
        raise DomainError(f"j must be a nonnegative integer, got {j!r}")
    params.require_admissible()
    _check_tol(rel_tol)
    log_z = _log_z_decimal(params, rel_tol, max_terms)[0]
    with localcontext() as ctx:
        ctx.prec = EXTENDED_DIGITS
        return float(log_term_decimal(params, int(j)) - log_z)


def pmf_window(params: CmpParams, rel_tol: float = 1e-14, max_terms=DEFAULT_MAX_TERMS):
    """Probabilities over the certified support window.

    Returns ``(first_index, probs)`` where ``probs[i] = P(X = first_index + i)``.
    Outside the window the mass is below ``rel_tol / 2``.
    """
    params.require_admissible()
    _check_tol(rel_tol)
    if params.nu == 0:
        lam = params.lam
        # geometric: tail beyond n is λ^n
        n = max(1, int(math.ceil(math.log(rel_tol / 4) / math.log(lam))))
        if n > max_terms:
            raise ResourceLimitError(f"window exceeds the cap of {max_terms} terms", max_terms)
        j = np.arange(n, dtype=np.float64)
        return 0, (1 - lam) * lam**j
    w = _scan(params, rel_tol, max_terms=max_terms)
    return w.first, w.terms / compensated_sum(w.terms)


def _geometric_moment(lam, n, rel_tol, max_terms):
    # Σ j^n (1-λ) λ^j summed directly; the terms eventually decay geometrically
    if n == 0:
        return 1.0
    total, running = [], 0.0
    j, t = 0, 1 - lam
    while True:
        if len(total) >= max_terms:
            raise ResourceLimitError(f"tolerance not reached within {max_terms} terms", max_terms)
        total.append(t * j**n)
        running += total[-1]
        j += 1
        t *= lam
        rho = lam * ((j + 1) / j) ** n
        if rho < 1 and running > 0 and t * j**n / (1 - rho) <= rel_tol / 4 * running:
            return math.fsum(total)


def _shifted_sums(w, shift, n_max):
    d = w.indices - shift
    s0 = compensated_sum(w.terms)
    out = [1.0]
    acc = w.terms.copy()
    for _ in range(n_max):
        acc = acc * d
        out.append(compensated_sum(acc) / s0)
    return out


def raw_moment_exact(params: CmpParams, n: int, rel_tol: float = 1e-14, max_terms=DEFAULT_MAX_TERMS) -> float:
    """E[X^n] by tail-certified summation, n ≤ 10."""
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if n > MAX_MOMENT_ORDER:
        raise DomainError(f"raw moments are supported up to order {MAX_MOMENT_ORDER}, got {n}")
    params.require_admissible()
    _check_tol(rel_tol)
    n = int(n)
    if params.nu == 0:
        return _geometric_moment(params.lam, n, rel_tol, max_terms)
    w = _scan(params, rel_tol, power=n, max_terms=max_terms)
    return _shifted_sums(w, 0.0, n)[n]


def cumulants_from_raw(raw):
    """κ₁…κₙ from μ′₁…μ′ₙ via κ_n = μ′_n − Σ C(n−1,k−1) κ_k μ′_{n−k}."""
    mu = [1.0] + list(raw)
    kappa = [0.0]
    for n in range(1, len(mu)):
        acc = mu[n] - math.fsum(math.comb(n - 1, k - 1) * kappa[k] * mu[n - k] for k in range(1, n))
        kappa.append(acc)
    return kappa[1:]


def cumulants_exact(params: CmpParams, n_max: int, rel_tol: float = 1e-14, max_terms=DEFAULT_MAX_TERMS) -> CumulantSet:
    """κ₁…κ_{n_max} (n_max ≤ 6) from exact moments.

    The recursion is run on moments about an integer near the mean, then
    κ₁ gets the shift added back.  Cumulants of order ≥ 2 are shift
    invariant, and the centred moments avoid the cancellation that raw
    moments suffer when the mean is large compared to the spread.
    """
    if not (1 <= n_max <= MAX_CUMULANT_ORDER):
        raise DomainError(f"n_max must be in 1..{MAX_CUMULANT_ORDER}, got {n_max!r}")
    params.require_admissible()
    _check_tol(rel_tol)
    if params.nu == 0:
        lam = params.lam
        raw = [_geometric_moment(lam, k, rel_tol, max_terms) for k in range(1, n_max + 1)]
        return CumulantSet(cumulants_from_raw(raw), EXACT)
    w = _scan(params, rel_tol, power=n_max, max_terms=max_terms)
    mean = _shifted_sums(w, 0.0, 1)[1]
    shift = float(round(mean))
    kappa = cumulants_from_raw(_shifted_sums(w, shift, n_max)[1:])
    kappa[0] += shift
    return CumulantSet(kappa, EXACT)


def exact_mean(params, rel_tol=1e-14):
    return raw_moment_exact(params, 1, rel_tol)


def exact_variance(params, rel_tol=1e-14):
    return cumulants_exact(params, 2, rel_tol)[2]
