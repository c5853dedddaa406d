"""Exact combinatorics of the Laplace-Beltrami spectrum on the sphere S^{d-1}.

Level ``n`` carries the eigenvalue ``n(n+d-2)`` with multiplicity ``k_d(n)``.
Everything that depends only on the ladder is computed with Python integers
and :class:`fractions.Fraction`; floats appear only in the geometric
constants (sphere area, ball volume, semiclassical constant).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError

__all__ = [
    "SphereSpec",
    "LadderEntry",
    "DomainSpec",
    "eigenvalue",
    "multiplicity",
    "multiplicity_partial_sum",
    "ladder",
    "sphere_area",
    "ball_volume",
    "classical_constant",
    "f_closed",
    "f_oracle",
    "level_moment_sums",
    "level_moment_sums_closed",
]


def _check_d(d: int) -> None:
    if not isinstance(d, int) or d < 3:
        raise DomainError(f"ambient dimension must be an integer >= 3, got {d!r}")


def _check_index(name: str, n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {n!r}")


@dataclass(frozen=True)
class SphereSpec:
    """The unit sphere S^{d-1} sitting in R^d."""

    d: int

    def __post_init__(self):
        _check_d(self.d)

    @property
    def area(self) -> float:
        return sphere_area(self.d)


@dataclass(frozen=True)
class LadderEntry:
    n: int
    lambda_n: int
    mult: int


@dataclass(frozen=True)
class DomainSpec:
    """A domain on S^{d-1}, described only by its surface measure."""

    d: int
    area: float

    def __post_init__(self):
        _check_d(self.d)
        full = sphere_area(self.d)
        # allow the last ulp or so when callers pass a rounded 4*pi
        if not (self.area > 0 and self.area <= full * (1 + 1e-12)):
            raise DomainError(
                f"area must lie in (0, {full!r}] for d={self.d}, got {self.area!r}"
            )

    @classmethod
    def whole_sphere(cls, d: int) -> "DomainSpec":
        return cls(d, sphere_area(d))

    @property
    def ratio(self) -> float:
        """|Omega| / sigma_d."""
        return self.area / sphere_area(self.d)


def eigenvalue(d: int, n: int) -> int:
    _check_d(d)
    _check_index("n", n)
    return n * (n + d - 2)


def multiplicity(d: int, n: int) -> int:
    """Multiplicity ``k_d(n) = binom(n+d-3, d-3) (2n+d-2) / (d-2)``.

    >>> [multiplicity(3, n) for n in range(4)]
    [1, 3, 5, 7]
    """
    _check_d(d)
    _check_index("n", n)
    num = math.comb(n + d - 3, d - 3) * (2 * n + d - 2)
    q, r = divmod(num, d - 2)
    assert r == 0, (d, n)
    return q


def multiplicity_partial_sum(d: int, N: int) -> int:
    """``sum_{n=0}^{N} k_d(n)``, which telescopes to ``k_{d+1}(N)``."""
    _check_d(d)
    _check_index("N", N)
    return multiplicity(d + 1, N)


def ladder(d: int, n_max: int) -> Iterator[LadderEntry]:
    _check_d(d)
    _check_index("n_max", n_max)
    for n in range(n_max + 1):
        yield LadderEntry(n, eigenvalue(d, n), multiplicity(d, n))


def sphere_area(d: int) -> float:
    """Surface area of S^{d-1}: ``2 pi^{d/2} / Gamma(d/2)``."""
    _check_d(d)
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d."""
    if not isinstance(d, int) or d < 1:
        raise DomainError(f"d must be an integer >= 1, got {d!r}")
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def classical_constant(sigma: float, d: int) -> float:
    """Semiclassical constant ``(2 pi)^{-d} int_{R^d} (1-|xi|^2)_+^sigma dxi``.

    Evaluates to ``Gamma(sigma+1) / ((4 pi)^{d/2} Gamma(sigma + d/2 + 1))``.
    """
    if not sigma >= 0:
        raise DomainError(f"sigma must be >= 0, got {sigma!r}")
    if not isinstance(d, int) or d < 1:
        raise DomainError(f"d must be an integer >= 1, got {d!r}")
    if sigma + d / 2 + 1 < 150:
        return math.gamma(sigma + 1) / (
            (4 * math.pi) ** (d / 2) * math.gamma(sigma + d / 2 + 1)
        )
    log_val = (
        math.lgamma(sigma + 1)
        - (d / 2) * math.log(4 * math.pi)
        - math.lgamma(sigma + d / 2 + 1)
    )
    return math.exp(log_val)


def f_closed(d: int, N: int) -> Fraction:
    """Closed form of ``f(Lambda_N) = sum_{n<N} k_d(n) (Lambda_N - Lambda_n)``."""
    _check_d(d)
    _check_index("N", N)
    return Fraction(
        (2 * N + d - 1) * (2 * N + d - 3) * math.comb(N + d - 2, d - 1), d + 1
    )


def level_moment_sums(d: int, N: int) -> tuple[int, int]:
    """Direct evaluation of the pair ``(Sigma_1, Sigma_2)`` with ``f = Sigma_1 - Sigma_2``.

    ``Sigma_1 = Lambda_N * sum_{n<N} k_d(n)`` and
    ``Sigma_2 = sum_{n<N} k_d(n) Lambda_n``.
    """
    _check_d(d)
    _check_index("N", N)
    lam_N = eigenvalue(d, N)
    s1 = 0
    s2 = 0
    for n in range(N):
        k = multiplicity(d, n)
        s1 += k * lam_N
        s2 += k * eigenvalue(d, n)
    return s1, s2


def level_moment_sums_closed(d: int, N: int) -> tuple[Fraction, Fraction]:
    """Closed forms of ``(Sigma_1, Sigma_2)``."""
    _check_d(d)
    _check_index("N", N)
    b = math.comb(N + d - 2, d - 1)
    s1 = Fraction(N * (2 * N + d - 3) * b)
    s2 = Fraction((d - 1) * b * (N - 1) * (2 * N + d - 3), d + 1)
    return s1, s2


def f_oracle(d: int, N: int) -> Fraction:
    """Brute-force ``f(Lambda_N)`` straight from the defining sum."""
    _check_d(d)
    _check_index("N", N)
    lam_N = eigenvalue(d, N)
    return Fraction(
        sum(multiplicity(d, n) * (lam_N - eigenvalue(d, n)) for n in range(N))
    )
