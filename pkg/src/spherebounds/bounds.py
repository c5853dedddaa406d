"""Eigenvalue bounds for domains on spheres, and verification of concrete spectra.

Each :class:`BoundFamily` is one inequality.  ``bound_value`` returns its
right-hand side at index ``n``; ``verify_spectrum`` compares a sorted
eigenvalue list against it row by row.

Index conventions: sum families bound ``sum_{k<=n}``; per-eigenvalue
families bound the n-th eigenvalue.  The Neumann per-eigenvalue bound is
usually written for ``mu_{k+1}`` with ``k = 0, 1, ...``; here ``n = k + 1``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .conjugate import check_sorted
from .errors import DimensionMismatchError, DomainError, SpectrumError
from .spectrum import DomainSpec, ball_volume

__all__ = [
    "BoundFamily",
    "BoundRow",
    "BoundReport",
    "bound_value",
    "verify_spectrum",
    "SATISFIED_RTOL",
]

SATISFIED_RTOL = 1e-9


class BoundFamily(str, enum.Enum):
    NEUMANN_SUM_UPPER_S2 = "neumann-sum-upper-S2"
    NEUMANN_SUM_UPPER_GENERAL = "neumann-sum-upper-general"
    DIRICHLET_SUM_LOWER_S2 = "dirichlet-sum-lower-S2"
    DIRICHLET_EIGENVALUE_LOWER = "dirichlet-eigenvalue-lower"
    DIRICHLET_LAMBDA1_LOWER = "dirichlet-lambda1-lower"
    NEUMANN_EIGENVALUE_UPPER = "neumann-eigenvalue-upper"
    VECTOR_DIRICHLET_SUM_LOWER = "vector-dirichlet-sum-lower"
    STOKES_SUM_LOWER = "stokes-sum-lower"

    def __str__(self):
        return self.value

    @property
    def is_upper(self) -> bool:
        return self in _UPPER

    @property
    def is_sum(self) -> bool:
        return self not in _SINGLE

    @property
    def s2_only(self) -> bool:
        return self not in _ANY_DIMENSION

    @property
    def boundary(self) -> str:
        return "neumann" if self in _UPPER else "dirichlet"


_UPPER = {
    BoundFamily.NEUMANN_SUM_UPPER_S2,
    BoundFamily.NEUMANN_SUM_UPPER_GENERAL,
    BoundFamily.NEUMANN_EIGENVALUE_UPPER,
}
_SINGLE = {
    BoundFamily.DIRICHLET_EIGENVALUE_LOWER,
    BoundFamily.DIRICHLET_LAMBDA1_LOWER,
    BoundFamily.NEUMANN_EIGENVALUE_UPPER,
}
_ANY_DIMENSION = {
    BoundFamily.NEUMANN_SUM_UPPER_GENERAL,
    BoundFamily.NEUMANN_EIGENVALUE_UPPER,
}


def _weyl_scale(domain: DomainSpec) -> float:
    """``((2 pi)^D / (omega_D |Omega|))^{2/D}`` with ``D = d - 1``."""
    D = domain.d - 1
    return ((2 * math.pi) ** D / (ball_volume(D) * domain.area)) ** (2 / D)


def bound_value(family: BoundFamily | str, domain: DomainSpec, n: int) -> float:
    """Right-hand side of ``family`` at index ``n >= 1``."""
    family = BoundFamily(family)
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"index n must be an integer >= 1, got {n!r}")
    if family.s2_only and domain.d != 3:
        raise DimensionMismatchError(f"{family} is stated on S^2 only (d=3), got d={domain.d}")
    A = domain.area
    F = BoundFamily
    if family is F.NEUMANN_SUM_UPPER_S2:
        return 2 * math.pi / A * n * n
    if family is F.NEUMANN_SUM_UPPER_GENERAL:
        D = domain.d - 1
        return D / (D + 2) * _weyl_scale(domain) * n ** (1 + 2 / D)
    if family is F.DIRICHLET_SUM_LOWER_S2:
        return 2 * math.pi / A * n * (n - A / (4 * math.pi))
    if family is F.DIRICHLET_EIGENVALUE_LOWER:
        return 2 * math.pi / A * (n - A / (4 * math.pi))
    if family is F.DIRICHLET_LAMBDA1_LOWER:
        if n != 1:
            raise DomainError(f"{family} bounds the first eigenvalue only, got n={n}")
        return 2 * math.pi / A * (1 - A / (4 * math.pi))
    if family is F.NEUMANN_EIGENVALUE_UPPER:
        D = domain.d - 1
        k = n - 1
        return ((D + 2) / 2) ** (2 / D) * _weyl_scale(domain) * k ** (2 / D)
    if family is F.VECTOR_DIRICHLET_SUM_LOWER:
        return math.pi / A * n * n
    if family is F.STOKES_SUM_LOWER:
        return 2 * math.pi / A * n * n
    raise AssertionError(family)


@dataclass(frozen=True)
class BoundRow:
    n: int
    lhs: float
    rhs: float
    margin: float
    satisfied: bool


@dataclass
class BoundReport:
    family: BoundFamily
    domain: DomainSpec
    rows: list = field(default_factory=list)

    @property
    def all_satisfied(self) -> bool:
        return all(r.satisfied for r in self.rows)

    @property
    def violations(self) -> list:
        return [r for r in self.rows if not r.satisfied]

    def records(self) -> list[dict]:
        return [
            {"family": str(self.family), "d": self.domain.d, "area": self.domain.area,
             "n": r.n, "lhs": r.lhs, "rhs": r.rhs, "margin": r.margin,
             "satisfied": r.satisfied}
            for r in self.rows
        ]


def verify_spectrum(
    family: BoundFamily | str,
    domain: DomainSpec,
    spectrum: Sequence[float],
    n_max: Optional[int] = None,
    error_bounds: Optional[Sequence[float]] = None,
    strict: bool = False,
) -> BoundReport:
    """Check a sorted spectrum against ``family`` for ``n = 1 .. n_max``.

    ``margin = lhs - rhs``; a lower bound holds when the margin is
    non-negative, an upper bound when it is non-positive.  By default a row
    passes within ``1e-9 * max(|lhs|, |rhs|, 1)``.  With ``strict=True`` the
    slack is instead the accumulated ``error_bounds`` of the eigenvalues
    entering ``lhs`` (plus roundoff).
    """
    family = BoundFamily(family)
    spectrum = [float(v) for v in spectrum]
    check_sorted(spectrum)
    if strict and error_bounds is None:
        raise ValueError("strict mode needs per-eigenvalue error bounds")
    if error_bounds is not None and len(error_bounds) != len(spectrum):
        raise SpectrumError("error_bounds must match the spectrum length")
    count = len(spectrum) if n_max is None else min(n_max, len(spectrum))
    if family is BoundFamily.DIRICHLET_LAMBDA1_LOWER:
        count = min(count, 1)

    report = BoundReport(family, domain)
    partial = []
    err_partial = 0.0
    for n in range(1, count + 1):
        value = spectrum[n - 1]
        partial.append(value)
        err = error_bounds[n - 1] if error_bounds is not None else 0.0
        err_partial += err
        if family.is_sum:
            lhs = math.fsum(partial)
            slack_err = err_partial
        else:
            lhs = value
            slack_err = err
        rhs = bound_value(family, domain, n)
        margin = lhs - rhs
        scale = max(abs(lhs), abs(rhs), 1.0)
        # strict mode still forgives floating-point roundoff in lhs/rhs
        slack = slack_err + 1e-13 * scale if strict else SATISFIED_RTOL * scale
        ok = margin <= slack if family.is_upper else margin >= -slack
        report.rows.append(BoundRow(n, lhs, rhs, margin, ok))
    return report
