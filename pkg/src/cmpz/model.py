"""Value types shared by the engines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .errors import DomainError
from .numerics import to_fraction

EXACT = "exact"
ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class CmpParams:
    """Rate-like parameter ``lam`` (λ) and dispersion ``nu`` (ν).

    Any finite ``lam > 0`` and ``nu >= 0`` can be constructed; the pair
    defines a distribution only when it is :attr:`admissible`, i.e.
    ``lam, nu > 0`` or ``0 < lam < 1, nu == 0``.

    Strings, Decimals and Fractions are accepted too.  Their exact value is
    kept in ``lam_exact`` / ``nu_exact`` so that ``CmpParams("1.9", "0.1")``
    means 19/10 and 1/10 rather than the nearest doubles, which matters
    when Z is wanted to the last digit and ``lam ** (1/nu)`` is large.
    """

    lam: float
    nu: float
    lam_exact: Fraction = field(init=False, repr=False)
    nu_exact: Fraction = field(init=False, repr=False)

    def __post_init__(self):
        lam, nu = float(to_fraction(self.lam)), float(to_fraction(self.nu))
        if not (math.isfinite(lam) and lam > 0):
            raise DomainError(f"lambda must be finite and > 0, got {self.lam!r}")
        if not (math.isfinite(nu) and nu >= 0):
            raise DomainError(f"nu must be finite and >= 0, got {self.nu!r}")
        object.__setattr__(self, "lam_exact", to_fraction(self.lam))
        object.__setattr__(self, "nu_exact", to_fraction(self.nu))
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "nu", nu)

    @property
    def admissible(self) -> bool:
        return self.nu > 0 or self.lam < 1

    @property
    def regime(self) -> str:
        if self.nu == 0:
            return "geometric" if self.lam < 1 else "inadmissible"
        if self.nu == 1:
            return "poisson"
        return "over-dispersed" if self.nu < 1 else "under-dispersed"

    def require_admissible(self) -> CmpParams:
        if not self.admissible:
            raise DomainError(
                f"(lambda={self.lam}, nu={self.nu}) is not admissible: "
                "nu = 0 requires lambda < 1"
            )
        return self

    def require_positive_nu(self) -> CmpParams:
        if not self.nu > 0:
            raise DomainError(f"the large-lambda expansion needs nu > 0, got {self.nu}")
        return self


@dataclass(frozen=True)
class CumulantSet:
    """Cumulants κ₁…κₙ with where they came from."""

    values: Tuple[float, ...]
    provenance: str = EXACT
    order_in_lambda: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.provenance not in (EXACT, ASYMPTOTIC):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        """κₙ, 1-based."""
        if n < 1:
            raise IndexError("cumulants are indexed from 1")
        return self.values[n - 1]


@dataclass(frozen=True)
class MomentSet:
    """Raw moments μ′₁…μ′ₙ and, optionally, central moments μ₂…μₙ."""

    raw: Tuple[float, ...]
    central: Optional[Tuple[float, ...]] = None
    provenance: str = EXACT

    def __post_init__(self):
        object.__setattr__(self, "raw", tuple(self.raw))
        if self.central is not None:
            object.__setattr__(self, "central", tuple(self.central))
