"""Riesz-mean majorant of the sphere ladder and its piecewise-linear structure.

``F(lambda) = (|Omega|/sigma_d) * sum_n (lambda - Lambda_n)_+^sigma k_d(n)``

For ``sigma = 1`` this is a convex polyline with corners at the sphere
eigenvalues ``Lambda_N``.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Optional

from scipy import integrate, special

from .errors import DomainError, NumericalFailure
from .spectrum import (
    DomainSpec,
    classical_constant,
    eigenvalue,
    f_closed,
    multiplicity,
    multiplicity_partial_sum,
)

__all__ = [
    "PiecewiseLinearConvex",
    "riesz_rhs",
    "build_F_piecewise",
    "F_S2_segment",
    "classical_gap",
    "F_prime_S2",
    "fprime_discriminant",
    "riesz_lift",
    "riesz_lift_residual",
    "vector_riesz_rhs",
    "vector_riesz_classical",
    "stokes_riesz_rhs",
    "power_conjugate",
]

_SLOPE_RTOL = 1e-12


@dataclass(frozen=True)
class PiecewiseLinearConvex:
    """Convex polyline through ``(xs[i], ys[i])``.

    Beyond the last breakpoint the function continues with ``tail_slope`` up to
    ``domain_end``; with ``tail_slope=None`` the domain stops at ``xs[-1]``.
    """

    xs: tuple
    ys: tuple
    tail_slope: Optional[float] = None
    domain_end: float = math.inf
    slopes: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        ys = tuple(float(y) for y in self.ys)
        if len(xs) == 0 or len(xs) != len(ys):
            raise ValueError("xs and ys must be non-empty and of equal length")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        slopes = tuple((y1 - y0) / (x1 - x0)
                       for x0, x1, y0, y1 in zip(xs, xs[1:], ys, ys[1:]))
        chain = slopes + ((self.tail_slope,) if self.tail_slope is not None else ())
        for a, b in zip(chain, chain[1:]):
            if b < a - _SLOPE_RTOL * max(1.0, abs(a), abs(b)):
                raise ValueError("slopes must be non-decreasing (convexity)")
        if self.tail_slope is None:
            end = xs[-1]
        else:
            end = float(self.domain_end)
            if end <= xs[-1]:
                raise ValueError("domain_end must exceed the last breakpoint")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "domain_end", end)
        object.__setattr__(self, "slopes", slopes)

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.ys))

    @property
    def max_slope(self) -> float:
        if self.tail_slope is not None:
            return self.tail_slope
        return self.slopes[-1] if self.slopes else -math.inf

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.domain_end)

    def __call__(self, x: float) -> float:
        xs = self.xs
        if x < xs[0] or x > self.domain_end:
            raise ValueError(f"x={x!r} outside [{xs[0]!r}, {self.domain_end!r}]")
        if x >= xs[-1]:
            if x == xs[-1]:
                return self.ys[-1]
            return self.ys[-1] + self.tail_slope * (x - xs[-1])
        # ties at a breakpoint resolve to the segment on its left
        i = max(bisect.bisect_left(xs, x) - 1, 0)
        return self.ys[i] + self.slopes[i] * (x - xs[i])


def _check_sigma(sigma: float, lower: float = 1.0, strict: bool = False) -> None:
    bad = sigma <= lower if strict else sigma < lower
    if bad:
        op = ">" if strict else ">="
        raise DomainError(f"Riesz order must be {op} {lower}, got {sigma!r}")


def _active_levels(d: int, lam: float) -> int:
    """Number of levels n with Lambda_n < lam."""
    if lam <= 0:
        return 0
    # Lambda_n < lam  <=>  n < -(d-2)/2 + sqrt(lam + (d-2)^2/4)
    n = int(math.sqrt(lam + (d - 2) ** 2 / 4) - (d - 2) / 2) + 1
    while n > 0 and eigenvalue(d, n - 1) >= lam:
        n -= 1
    while eigenvalue(d, n) < lam:
        n += 1
    return n


def riesz_rhs(domain: DomainSpec, lam: float, sigma: float = 1.0) -> float:
    """Sphere-ladder Riesz mean scaled by ``|Omega|/sigma_d``."""
    _check_sigma(sigma)
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam!r}")
    d = domain.d
    terms = [(lam - eigenvalue(d, n)) ** sigma * multiplicity(d, n)
             for n in range(_active_levels(d, lam))]
    return domain.ratio * math.fsum(terms)


def build_F_piecewise(domain: DomainSpec, lambda_max: float) -> PiecewiseLinearConvex:
    """Polyline of ``F`` (order 1) with corners at every ``Lambda_N <= lambda_max``.

    The trailing segment carries the slope valid up to the next corner.
    """
    if not lambda_max > 0:
        raise DomainError(f"lambda_max must be > 0, got {lambda_max!r}")
    d = domain.d
    ratio = domain.ratio
    xs, ys = [], []
    N = 0
    while eigenvalue(d, N) <= lambda_max:
        xs.append(eigenvalue(d, N))
        ys.append(ratio * float(f_closed(d, N)))
        N += 1
    # on [Lambda_{N-1}, Lambda_N] the active multiplicities sum to k_{d+1}(N-1)
    tail = ratio * multiplicity_partial_sum(d, N - 1)
    return PiecewiseLinearConvex(tuple(xs), tuple(ys), tail, eigenvalue(d, N))


def F_S2_segment(alpha: float, N: int, lam: float) -> float:
    """``alpha (2 N^2 lam - N^2 (N^2 - 1))``, valid for lam in [Lambda_{N-1}, Lambda_N]."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N!r}")
    lo, hi = (N - 1) * N, N * (N + 1)
    slack = 1e-12 * max(1.0, hi)
    if not lo - slack <= lam <= hi + slack:
        raise DomainError(f"lambda={lam!r} outside [{lo}, {hi}] for N={N}")
    return alpha * (2 * N * N * lam - N * N * (N * N - 1))


def classical_gap(domain: DomainSpec, lam: float) -> float:
    """``F(lam) - L_{1,d-1} |Omega| lam^{(d+1)/2}``; never negative."""
    d = domain.d
    parabola = classical_constant(1, d - 1) * domain.area * lam ** ((d + 1) / 2)
    return riesz_rhs(domain, lam) - parabola


def F_prime_S2(alpha: float, lam: float) -> float:
    """``F`` on S^2 with the constant mode dropped: ``2 alpha sum_{n>=1} (lam - n(n+1))_+ (2n+1)``."""
    if not 0 < alpha <= 0.5:
        raise DomainError(f"alpha must lie in (0, 1/2], got {alpha!r}")
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam!r}")
    terms = [(lam - n * (n + 1)) * (2 * n + 1)
             for n in range(1, _active_levels(3, lam))]
    return 2 * alpha * math.fsum(terms)


def fprime_discriminant(N: int) -> int:
    """Discriminant of ``lam^2 - 2(N^2-1) lam + N^2 (N^2-1)``.

    Non-positive discriminant means ``F' <= alpha lam^2`` on the N-th segment.
    """
    a, b, c = 1, -2 * (N * N - 1), N * N * (N * N - 1)
    return b * b - 4 * a * c


def _lift_constant(sigma: float) -> float:
    return special.beta(2, sigma - 1)


def _quad(fn, a, b, points=None):
    val, abserr, info, *rest = integrate.quad(
        fn, a, b, points=points, epsabs=1e-13, epsrel=1e-13, limit=500,
        full_output=True)
    if rest:
        raise NumericalFailure(f"quadrature on [{a}, {b}] did not converge: {rest[0]}")
    return val


def riesz_lift_residual(E: float, sigma: float) -> float:
    """``|E_+^sigma - c_sigma^{-1} int_0^inf (E-t)_+ t^{sigma-2} dt|`` by quadrature."""
    _check_sigma(sigma, strict=True)
    if E <= 0:
        return 0.0
    integral = _quad(lambda t: (E - t) * t ** (sigma - 2), 0.0, E)
    return abs(E ** sigma - integral / _lift_constant(sigma))


def riesz_lift(domain: DomainSpec, lam: float, sigma: float) -> float:
    """Order-``sigma`` majorant rebuilt from order-1 values.

    ``c_sigma^{-1} int_0^lam F_1(lam - t) t^{sigma-2} dt``; this is an
    independent route to ``riesz_rhs(domain, lam, sigma)``.
    """
    _check_sigma(sigma, strict=True)
    if lam <= 0:
        return 0.0
    d = domain.d
    kinks = [lam - eigenvalue(d, n) for n in range(1, _active_levels(d, lam))]
    integral = _quad(lambda t: riesz_rhs(domain, lam - t) * t ** (sigma - 2),
                     0.0, lam, points=kinks or None)
    return integral / _lift_constant(sigma)


def vector_riesz_rhs(area: float, lam: float) -> float:
    """Majorant for the vector Dirichlet Laplacian on S^2: twice ``F'``."""
    return 2 * F_prime_S2(area / (8 * math.pi), lam)


def vector_riesz_classical(area: float, lam: float) -> float:
    """Classical majorant ``2 L_{1,2} |Omega| lam^2`` dominating :func:`vector_riesz_rhs`."""
    return 2 * (classical_constant(1, 2) * area * lam ** 2)


def stokes_riesz_rhs(area: float, lam: float) -> float:
    """Majorant for the Stokes operator on S^2 (divergence-free family only)."""
    return F_prime_S2(area / (8 * math.pi), lam)


def power_conjugate(c: float, a: float, p: float) -> float:
    """Convex conjugate of ``c x^a`` on x >= 0 (``a > 1``) evaluated at ``p >= 0``."""
    if p <= 0:
        return 0.0
    x_star = (p / (a * c)) ** (1 / (a - 1))
    return p * (1 - 1 / a) * x_star

