"""Scalar building blocks: log-gamma, extended-range positive numbers, summation.

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import MAX_EMAX, MIN_EMIN, Decimal, localcontext
from fractions import Fraction
from typing import Iterable

from .errors import DomainError

# Cody-Waite split of ln 2: k * LN2_HI is exact for |k| < 2**20.
LN2_HI = 6.93147180369123816490e-01
LN2_LO = 1.90821492927058770002e-10
HALF_LOG_2PI = 0.91893853320467274178

# working precision (significant digits) for the few quantities that need
# more than a double carries, e.g. the log of a term far from the origin
EXTENDED_DIGITS = 40
HALF_LOG_2PI_DECIMAL = "0.918938533204672741780329736405617639861397473637783"

_LGAMMA_AT_ONE = (
    -0.5772156649015329, 0.8224670334241132, -0.40068563438653143,
    0.27058080842778454, -0.20738555102867398, 0.1695571769974082,
    -0.1440498967688461, 0.12550966952474304, -0.11133426586956469,
    0.1000994575127818, -0.09095401714582904, 0.083353840546109,
    -0.0769325164113522, 0.07143294629536133, -0.06666870588242046,
    0.06250095514121304, -0.058823978658684585, 0.055555767627403614,
    -0.05263167937961666, 0.05000004769810169, -0.047619070330142226,
    0.04545455629320467, -0.04347826605304026, 0.04166666915034121,
    -0.04000000119214014, 0.03846153903467518, -0.037037037312989324,
    0.035714285847333355, -0.034482758684919304, 0.03333333336437758,
    -0.03225806453115042, 0.03125000000727597, -0.030303030306558044,
    0.029411764707594344, -0.02857142857226011, 0.027777777778181998,
    -0.027027027027223673, 0.02631578947377995, -0.025641025641072283,
    0.025000000000022737, -0.024390243902450117, 0.023809523809529224,
    -0.023255813953491015, 0.02272727272727402, -0.022222222222222855,
    0.021739130434782917, -0.021276595744681003, 0.02083333333333341,
    -0.02040816326530616, 0.020000000000000018, -0.019607843137254912,
    0.019230769230769235, -0.01886792452830189, 0.01851851851851852,
    -0.01818181818181818, 0.017857142857142856, -0.017543859649122806,
    0.017241379310344827, -0.01694915254237288, 0.016666666666666666,
    -0.01639344262295082,
)

_LGAMMA_AT_TWO = (
    0.42278433509846713, 0.3224670334241132, -0.0673523010531981,
    0.020580808427784546, -0.007385551028673986, 0.0028905103307415234,
    -0.001192753911703261, 0.0005096695247430425, -0.00022315475845357939,
    9.945751278180853e-05, -4.492623673813314e-05, 2.050721277567069e-05,
    -9.439488275268397e-06, 4.374866789907488e-06, -2.039215753801366e-06,
    9.55141213040742e-07, -4.492469198764566e-07, 2.1207184805554665e-07,
    -1.0043224823968099e-07, 4.7698101693639804e-08, -2.2711094608943164e-08,
    1.0838659214896955e-08, -5.183475041970047e-09, 2.4836745438024785e-09,
    -1.1921401405860912e-09, 5.731367241678862e-10, -2.7595228851242334e-10,
    1.330476437424449e-10, -6.4229645638381e-11, 3.1044247747322276e-11,
    -1.5021384080754142e-11, 7.275974480239079e-12, -3.527742476575915e-12,
    1.711991790559618e-12, -8.315385841420285e-13, 4.04220052528944e-13,
    -1.9664756310966165e-13, 9.573630387838556e-14, -4.6640760264283744e-14,
    2.2737369600659724e-14, -1.1091399470834522e-14,
)

# B_{2k} / (2k (2k - 1)), k = 1..13
_STIRLING_PQ = (
    (1, 12), (-1, 360), (1, 1260), (-1, 1680), (1, 1188),
    (-691, 360360), (1, 156), (-3617, 122400), (43867, 244188),
    (-174611, 125400), (77683, 5796), (-236364091, 1506960),
    (657931, 300),
)
_STIRLING = tuple(p / q for p, q in _STIRLING_PQ)
_STIRLING_MIN = 10.0


def _horner(coeffs, x):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def stirling_correction(z: float) -> float:
    """Remainder of Stirling's formula.

    Returns ``ln Γ(z) - ((z - 1/2) ln z - z + ln(2π)/2)``.  For ``z >= 10`` the
    Bernoulli-number series is summed directly, so the result keeps full
    relative accuracy even though it is small.
    """
    if not z > 0 or not math.isfinite(z):
        raise DomainError(f"stirling_correction needs a finite z > 0, got {z!r}")
    acc = 0.0
    while z < _STIRLING_MIN:
        # S(z) = S(z + 1) + (z + 1/2) log1p(1/z) - 1
        acc += _stirling_step(z)
        z += 1.0
    w = 1.0 / (z * z)
    return acc + _horner(_STIRLING, w) / z


# (-1)^m (m - 1) / (2 m (m + 1)), m = 2..60
_STEP_SERIES = tuple((-1) ** m * (m - 1) / (2 * m * (m + 1)) for m in range(2, 61))


def _stirling_step(z):
    w = 1.0 / z
    if w > 0.5:
        return (z + 0.5) * math.log1p(w) - 1.0
    return _horner(_STEP_SERIES, w) * w * w


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for real ``x > 0``.

    Relative error stays within a few ulp on ``[1e-6, 1e12]``, including
    next to the zeros at 1 and 2 where a plain Stirling or Lanczos
    evaluation loses all relative precision.
    """
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"log_gamma needs a finite x > 0, got {x!r}")
    if x < 0.5:
        return _horner(_LGAMMA_AT_ONE, x) * x - math.log(x)
    if x < 1.5:
        e = x - 1.0
        return _horner(_LGAMMA_AT_ONE, e) * e
    if x < 2.5:
        e = x - 2.0
        return _horner(_LGAMMA_AT_TWO, e) * e
    if x < _STIRLING_MIN:
        # shift down into [1.5, 2.5) and pick up the product of the shifts
        prod = 1.0
        while x >= 2.5:
            x -= 1.0
            prod *= x
        e = x - 2.0
        return _horner(_LGAMMA_AT_TWO, e) * e + math.log(prod)
    return (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + stirling_correction(x)


@dataclass(frozen=True)
class LogValue:
    """A nonnegative real with unbounded exponent range.

    Stored as ``mantissa * 2**exponent`` with ``mantissa`` in ``[0.5, 1)`` (or
    exactly zero), so values like ``Z(λ, ν)`` far outside the double range
    are carried without overflow and values inside it convert back exactly.
    ``log_magnitude`` gives the natural log.
    """

    mantissa: float
    exponent: int = 0

    @classmethod
    def zero(cls) -> LogValue:
        return cls(0.0, 0)

    @classmethod
    def one(cls) -> LogValue:
        return cls(0.5, 1)

    @classmethod
    def _normalized(cls, m: float, e: int) -> LogValue:
        if m == 0.0:
            return cls.zero()
        if not (m > 0 and math.isfinite(m)):
            raise DomainError(f"LogValue mantissa must be finite and >= 0, got {m!r}")
        fm, fe = math.frexp(m)
        return cls(fm, e + fe)

    @classmethod
    def from_linear(cls, x: float) -> LogValue:
        x = float(x)
        if x < 0 or not math.isfinite(x):
            raise DomainError(f"LogValue needs a finite x >= 0, got {x!r}")
        return cls._normalized(x, 0)

    @classmethod
    def from_log(cls, log_x: float, log_lo: float = 0.0) -> LogValue:
        """``exp(log_x + log_lo)``; ``log_lo`` carries bits below the ulp of ``log_x``."""
        if log_x == -math.inf:
            return cls.zero()
        if not math.isfinite(log_x):
            raise DomainError(f"cannot represent exp({log_x!r})")
        k = math.floor(log_x / math.log(2.0))
        r = (log_x - k * LN2_HI) - k * LN2_LO + log_lo
        return cls._normalized(math.exp(r), k)

    @classmethod
    def from_log_decimal(cls, log_x: Decimal) -> LogValue:
        return cls.from_log(*split_decimal(log_x))

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0.0

    @property
    def log_magnitude(self) -> float:
        if self.is_zero:
            return -math.inf
        e = self.exponent
        return math.fsum((e * LN2_HI, e * LN2_LO, math.log(self.mantissa)))

    @property
    def log10(self) -> float:
        return self.log_magnitude / math.log(10.0)

    def to_linear(self) -> float:
        """Convert to a float; raises ``OverflowError`` beyond the double range."""
        if self.is_zero:
            return 0.0
        return math.ldexp(self.mantissa, self.exponent)

    def scientific(self, digits: int = 15) -> str:
        """Decimal scientific notation, valid even when ``to_linear`` overflows."""
        if self.is_zero:
            return "0"
        try:
            x = self.to_linear()
            if x >= 2.2250738585072014e-308:
                return f"{x:.{digits}g}"
        except OverflowError:
            pass
        with localcontext() as ctx:
            ctx.prec = digits + 10
            ctx.Emax = MAX_EMAX
            ctx.Emin = MIN_EMIN
            d = Decimal(self.mantissa) * Decimal(2) ** self.exponent
        return f"{d:.{digits - 1}e}"

    def __add__(self, other: LogValue) -> LogValue:
        return logvalue_add(self, other)

    def __mul__(self, other) -> LogValue:
        if isinstance(other, LogValue):
            return LogValue._normalized(
                self.mantissa * other.mantissa, self.exponent + other.exponent
            )
        other = float(other)
        if other < 0:
            raise DomainError("LogValue cannot hold negative values")
        return LogValue._normalized(self.mantissa * other, self.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other) -> LogValue:
        if isinstance(other, LogValue):
            if other.is_zero:
                raise ZeroDivisionError("division by a zero LogValue")
            return LogValue._normalized(
                self.mantissa / other.mantissa, self.exponent - other.exponent
            )
        return self * (1.0 / float(other))

    def log_ratio(self, other: LogValue) -> float:
        """``ln(self / other)`` without forming either log separately."""
        return (self / other).log_magnitude


def logvalue_add(a: LogValue, b: LogValue) -> LogValue:
    """Sum of two ``LogValue`` numbers, aligned on the larger exponent."""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    e = max(a.exponent, b.exponent)
    m = math.ldexp(a.mantissa, a.exponent - e) + math.ldexp(b.mantissa, b.exponent - e)
    return LogValue._normalized(m, e)


def compensated_sum(terms: Iterable[float]) -> float:
    """Sum of floats rounded once from the exact sum (Shewchuk's algorithm)."""
    return math.fsum(terms)


def log1p_minus_identity(u: float) -> float:
    """``log1p(u) - u`` with full relative accuracy for small ``u``."""
    if abs(u) >= 0.5:
        return math.log1p(u) - u
    # -u^2 * (1/2 - u/3 + u^2/4 - ...); 0.5**56 / 58 < 1e-18
    acc = 0.0
    for k in range(58, 1, -1):
        acc = acc * -u + (1.0 / k)
    return -acc * u * u


def to_fraction(x) -> Fraction:
    """Exact rational value of a float, int, Decimal, Fraction or decimal string."""
    if isinstance(x, str):
        x = x.strip()
    try:
        return Fraction(x)
    except (ValueError, TypeError, OverflowError) as exc:
        raise DomainError(f"not a finite real number: {x!r}") from exc


def split_decimal(d: Decimal):
    """``(hi, lo)`` floats with ``hi + lo`` equal to ``d`` to about 32 digits."""
    with localcontext() as ctx:
        ctx.prec = EXTENDED_DIGITS
        hi = float(d)
        lo = float(d - Decimal(hi))
    return hi, lo


def fraction_to_decimal(f: Fraction) -> Decimal:
    """Round to the ambient decimal context."""
    return Decimal(f.numerator) / Decimal(f.denominator)


def log_gamma_decimal(z: Decimal) -> Decimal:
    """ln Γ(z) for z > 0 in the ambient decimal context.

    Shifts z up to at least 60 and applies 13 terms of the Stirling series,
    whose truncation error there is below 1e-40.
    """
    if not z > 0:
        raise DomainError(f"log-gamma needs a positive argument, got {z}")
    shift = Decimal(0)
    while z < 60:
        shift += z.ln()
        z += 1
    acc = (z - Decimal("0.5")) * z.ln() - z + Decimal(HALF_LOG_2PI_DECIMAL)
    zz = z * z
    zpow = z
    for p, q in _STIRLING_PQ:
        acc += Decimal(p) / (Decimal(q) * zpow)
        zpow *= zz
    return acc - shift


def log_factorial_decimal(n: int) -> Decimal:
    """ln(n!) in the ambient decimal context (set its precision first)."""
    if n < 0:
        raise DomainError(f"factorial of a negative number: {n}")
    if n < 60:
        return sum((Decimal(k).ln() for k in range(2, n + 1)), Decimal(0))
    return log_gamma_decimal(Decimal(n + 1))
