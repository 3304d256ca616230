"""Large-λ expansion of Z(λ, ν) for fixed ν > 0.

With α = λ^{1/ν},

    Z(λ, ν) ~ exp(να) / (λ^{(ν-1)/(2ν)} (2π)^{(ν-1)/2} √ν) · Σ_k c_k (να)^{-k}

where the c_k are polynomials in ν² fixed by the inverse-factorial
expansion

    Γ(t+1)^{-ν} = ν^{ν(t+1/2)} (2π)^{-(ν-1)/2} Σ_j c_j / Γ(νt + (1+ν)/2 + j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, DecimalException, localcontext
from fractions import Fraction
from typing import Tuple

from .errors import DomainError
from .exact import DEFAULT_MAX_TERMS, _check_tol, _log_z_decimal
from .model import CmpParams
from .numerics import (
    EXTENDED_DIGITS,
    HALF_LOG_2PI_DECIMAL,
    LogValue,
    compensated_sum,
    fraction_to_decimal,
    log_gamma_decimal,
    split_decimal,
    to_fraction,
)

MAX_ORDER = 8
_RESIDUAL_DIGITS = 60


@dataclass(frozen=True)
class CoeffPolynomial:
    """c_j = (ν² - 1) · P_j(ν²) / denominator for j ≥ 1, and c_0 = 1.

    ``numerator_coeffs`` holds P_j highest power first.
    """

    index: int
    numerator_coeffs: Tuple[int, ...]
    denominator: int

    def exact(self, nu) -> Fraction:
        s = to_fraction(nu) ** 2
        acc = Fraction(0)
        for a in self.numerator_coeffs:
            acc = acc * s + a
        if self.index > 0:
            acc *= s - 1
        return acc / self.denominator

    def __call__(self, nu) -> float:
        return float(self.exact(nu))


COEFFICIENTS = tuple(
    CoeffPolynomial(j, tuple(p), d)
    for j, (d, p) in enumerate(
        [
            (1, [1]),
            (24, [1]),
            (1152, [1, 23]),
            (414720, [5, -298, 11237]),
            (39813120, [5, -1887, -241041, 2482411]),
            (6688604160, [7, -7420, 1451274, -220083004, 1363929895]),
            (4815794995200, [35, -78295, 76299326, 25171388146, -915974552561, 4175309343349]),
            (
                115579079884800,
                [5, -20190, 45700491, -19956117988, 7134232164555, -142838662997982, 525035501918789],
            ),
        ]
    )
)


def coeff(j: int, nu) -> float:
    if not (0 <= j < MAX_ORDER) or int(j) != j:
        raise DomainError(f"coefficient index must be in 0..{MAX_ORDER - 1}, got {j!r}")
    if not to_fraction(nu) > 0:
        raise DomainError(f"nu must be > 0, got {nu!r}")
    return COEFFICIENTS[int(j)](nu)


@dataclass(frozen=True)
class AsymEval:
    value: LogValue
    terms: Tuple[float, ...]
    order_used: int
    prefactor_log: float
    series_sum: float

    @property
    def log_value(self) -> float:
        return self.prefactor_log + math.log(self.series_sum) if self.series_sum > 0 else -math.inf

    @property
    def smallest_term_index(self) -> int:
        """Index of the smallest |term|; past it the series has started to diverge."""
        mags = [abs(t) for t in self.terms]
        return mags.index(min(mags))


def _check_order(order):
    if not (1 <= order <= MAX_ORDER) or int(order) != order:
        raise DomainError(f"order must be in 1..{MAX_ORDER}, got {order!r}")


def _prefactor(params):
    """(log prefactor as Decimal, να as float), from the exact parameters."""
    with localcontext() as ctx:
        ctx.prec = EXTENDED_DIGITS
        lam = fraction_to_decimal(params.lam_exact)
        nu = fraction_to_decimal(params.nu_exact)
        log_lam = lam.ln()
        log_alpha = log_lam / nu
        if float(log_alpha + nu.ln()) > 700:
            raise OverflowError(f"nu * lambda^(1/nu) overflows for lambda={params.lam}, nu={params.nu}")
        try:
            nu_alpha = nu * log_alpha.exp()
        except DecimalException as exc:
            raise OverflowError("lambda^(1/nu) is out of range") from exc
        half = Decimal("0.5")
        log_pref = (
            nu_alpha
            - (nu - 1) / (2 * nu) * log_lam
            - (nu - 1) * Decimal(HALF_LOG_2PI_DECIMAL)
            - half * nu.ln()
        )
        return +log_pref, float(nu_alpha)


def _series(params, nu_alpha, order):
    inv = 1.0 / nu_alpha
    terms = [1.0]
    for k in range(1, order):
        terms.append(COEFFICIENTS[k](params.nu_exact) * inv**k)
    return tuple(terms)


def z_asymptotic(params: CmpParams, order: int) -> AsymEval:
    """Expansion of Z truncated to ``order`` terms (``order=1`` is the leading term)."""
    params.require_positive_nu()
    _check_order(order)
    log_pref, nu_alpha = _prefactor(params)
    terms = _series(params, nu_alpha, order)
    total = compensated_sum(terms)
    hi, lo = split_decimal(log_pref)
    value = LogValue.from_log(hi, lo) * total if total > 0 else LogValue.zero()
    return AsymEval(value, terms, order, hi, total)


def percent_errors(params: CmpParams, orders, rel_tol: float = 1e-14, max_terms=DEFAULT_MAX_TERMS):
    """:func:`percent_error` for several orders, sharing one exact evaluation."""
    params.require_admissible()
    params.require_positive_nu()
    orders = list(orders)
    for order in orders:
        _check_order(order)
    _check_tol(rel_tol)
    log_pref, nu_alpha = _prefactor(params)
    log_z = _log_z_decimal(params, rel_tol, max_terms)[0]
    with localcontext() as ctx:
        ctx.prec = EXTENDED_DIGITS
        gap = float(log_pref - log_z)
    out = []
    for order in orders:
        total = compensated_sum(_series(params, nu_alpha, order))
        if total > 0:
            out.append(100.0 * math.expm1(gap + math.log(total)))
        else:
            out.append(100.0 * (math.exp(gap) * total - 1.0))
    return out


def percent_error(params: CmpParams, order: int, rel_tol: float = 1e-14, max_terms=DEFAULT_MAX_TERMS) -> float:
    """100 (approximation - exact) / exact; negative when the expansion is too small."""
    return percent_errors(params, [order], rel_tol, max_terms)[0]


def relative_error(params: CmpParams, order: int, rel_tol: float = 1e-14) -> float:
    """Signed relative error of the expansion, without the factor 100."""
    return percent_error(params, order, rel_tol) / 100.0


def verify_inverse_factorial(nu: float, t: float, J: int) -> float:
    """Relative residual of the J-term inverse-factorial expansion at (ν, t).

    The two sides agree to many digits, so both are formed in 60-digit
    decimal arithmetic; in doubles the cancellation would leave nothing
    below about 1e-18.
    """
    if not (1 <= J <= MAX_ORDER) or int(J) != J:
        raise DomainError(f"J must be in 1..{MAX_ORDER}, got {J!r}")
    if not (math.isfinite(nu) and nu > 0):
        raise DomainError(f"nu must be finite and > 0, got {nu!r}")
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"t must be finite and > 0, got {t!r}")
    if nu * t > 1e15:
        raise OverflowError(f"nu*t is too large for nu={nu}, t={t}")
    with localcontext() as ctx:
        ctx.prec = _RESIDUAL_DIGITS
        nu_d, t_d = Decimal(nu), Decimal(t)
        half = Decimal("0.5")
        x = nu_d * t_d + (1 + nu_d) * half
        log_ratio = (
            nu_d * (t_d + half) * nu_d.ln()
            - (nu_d - 1) * Decimal(HALF_LOG_2PI_DECIMAL)
            + nu_d * log_gamma_decimal(t_d + 1)
            - log_gamma_decimal(x)
        )
        frac_nu = Fraction(nu)
        total = Decimal(0)
        rising = Decimal(1)
        for j in range(int(J)):
            c = COEFFICIENTS[j].exact(frac_nu)
            total += fraction_to_decimal(c) / rising
            rising *= x + j
        return float(abs(log_ratio.exp() * total - 1))
