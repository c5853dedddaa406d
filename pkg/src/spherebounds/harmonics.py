"""Real spherical harmonics on S^2 and the pointwise identities they satisfy.

Harmonics of level ``n`` are indexed by ``k = 1 .. 2n+1``:

* ``k = 1``      -> ``Q_n^0(theta)``
* ``k = 2m``     -> ``sqrt(2) Q_n^m(theta) cos(m phi)``
* ``k = 2m + 1`` -> ``sqrt(2) Q_n^m(theta) sin(m phi)``

where ``Q_n^m`` is the associated Legendre function normalised so that the
harmonics are orthonormal on the unit sphere (no Condon-Shortley phase).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .spectrum import multiplicity, sphere_area

__all__ = [
    "SpherePoint",
    "TangentVector",
    "legendre_poly",
    "gegenbauer",
    "addition_kernel",
    "assoc_legendre_normalized",
    "real_sph_harm",
    "real_sph_harm_level",
    "sph_harm_gradient",
    "sph_harm_gradient_level",
    "identity_residuals",
    "random_points",
    "MAX_LEVEL",
]

MAX_LEVEL = 30
_TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"colatitude must lie in [0, pi], got {self.theta!r}")
        phi = 0.0 if self.theta in (0.0, math.pi) else self.phi % _TWO_PI
        object.__setattr__(self, "phi", phi)

    @property
    def is_pole(self) -> bool:
        return self.theta in (0.0, math.pi)

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


@dataclass(frozen=True)
class TangentVector:
    """Components in the orthonormal frame ``(e_theta, e_phi)``."""

    v_theta: float
    v_phi: float

    @property
    def norm2(self) -> float:
        return self.v_theta ** 2 + self.v_phi ** 2

    def perp(self) -> "TangentVector":
        """Rotation ``u -> (u_2, -u_1)``, i.e. ``-n x u``."""
        return TangentVector(self.v_phi, -self.v_theta)


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1):
        raise DomainError("argument must satisfy |t| <= 1")
    return t


def legendre_poly(n: int, t):
    """Legendre polynomial ``P_n(t)`` by Bonnet's recurrence."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n!r}")
    t = _check_t(t)
    p_prev, p = np.ones_like(t), t.copy()
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * t * p - k * p_prev) / (k + 1)
    return p if p.ndim else float(p)


def gegenbauer(lam: float, n: int, t):
    """Gegenbauer polynomial ``C_n^lam(t)``, generating function ``(1 - 2rt + r^2)^{-lam}``."""
    if not lam > 0:
        raise DomainError(f"Gegenbauer parameter must be > 0, got {lam!r}")
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n!r}")
    t = _check_t(t)
    c_prev, c = np.ones_like(t), 2 * lam * t
    if n == 0:
        return c_prev if c_prev.ndim else float(c_prev)
    for k in range(1, n):
        c_prev, c = c, (2 * (k + lam) * t * c - (k + 2 * lam - 1) * c_prev) / (k + 1)
    return c if c.ndim else float(c)


def addition_kernel(d: int, n: int, t):
    """``sum_k Y_n^k(s) Y_n^k(s0)`` on S^{d-1} as a function of ``t = s . s0``."""
    lam = (d - 2) / 2
    return (2 * n + d - 2) / ((d - 2) * sphere_area(d)) * gegenbauer(lam, n, t)


def assoc_legendre_normalized(n: int, theta) -> np.ndarray:
    """``Q_n^m(theta)`` for ``m = 0 .. n``; returns shape ``(n + 1,) + theta.shape``."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n!r}")
    theta = np.asarray(theta, dtype=float)
    x, s = np.cos(theta), np.sin(theta)
    out = np.zeros((n + 1,) + theta.shape)
    diag = np.full(theta.shape, 1 / math.sqrt(4 * math.pi))
    for m in range(n + 1):
        if m > 0:
            diag = math.sqrt((2 * m + 1) / (2 * m)) * s * diag
        if m == n:
            out[m] = diag
            continue
        q_prev, q = diag, math.sqrt(2 * m + 3) * x * diag
        for l in range(m + 2, n + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            q_prev, q = q, a * (x * q - b * q_prev)
        out[m] = q
    return out


def _assoc_legendre_dtheta(n: int, Q: np.ndarray) -> np.ndarray:
    dQ = np.zeros_like(Q)
    if n == 0:
        return dQ
    dQ[0] = -math.sqrt(n * (n + 1)) * Q[1]
    for m in range(1, n + 1):
        up = math.sqrt((n - m) * (n + m + 1)) * Q[m + 1] if m < n else 0.0
        dQ[m] = 0.5 * (math.sqrt((n + m) * (n - m + 1)) * Q[m - 1] - up)
    return dQ


def _check_level(n: int, k: Optional[int] = None) -> None:
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"level must be a non-negative integer, got {n!r}")
    if k is not None and not 1 <= k <= 2 * n + 1:
        raise DomainError(f"index k must lie in [1, {2 * n + 1}], got {k!r}")


def real_sph_harm_level(n: int, theta, phi) -> np.ndarray:
    """All ``2n+1`` real harmonics of level ``n``; shape ``(2n+1,) + theta.shape``."""
    _check_level(n)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    Q = assoc_legendre_normalized(n, theta)
    out = np.empty((2 * n + 1,) + np.broadcast(theta, phi).shape)
    out[0] = Q[0]
    r2 = math.sqrt(2)
    for m in range(1, n + 1):
        out[2 * m - 1] = r2 * Q[m] * np.cos(m * phi)
        out[2 * m] = r2 * Q[m] * np.sin(m * phi)
    return out


def real_sph_harm(n: int, k: int, point: SpherePoint) -> float:
    _check_level(n, k)
    return float(real_sph_harm_level(n, point.theta, point.phi)[k - 1])


def sph_harm_gradient_level(n: int, theta, phi) -> np.ndarray:
    """Gradients of the level-``n`` harmonics; shape ``(2n+1, 2) + theta.shape``.

    Component 0 is along ``e_theta``, component 1 along ``e_phi``.  Modes with
    ``m >= 1`` need ``sin(theta) != 0``.
    """
    _check_level(n)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    Q = assoc_legendre_normalized(n, theta)
    dQ = _assoc_legendre_dtheta(n, Q)
    shape = np.broadcast(theta, phi).shape
    out = np.zeros((2 * n + 1, 2) + shape)
    out[0, 0] = dQ[0]
    if n == 0:
        return out
    s = np.sin(theta)
    if np.any((theta == 0) | (theta == math.pi)):
        raise DomainError("the (e_theta, e_phi) frame is singular at the poles")
    r2 = math.sqrt(2)
    for m in range(1, n + 1):
        c, sn = np.cos(m * phi), np.sin(m * phi)
        q_over_s = Q[m] / s
        out[2 * m - 1, 0] = r2 * dQ[m] * c
        out[2 * m - 1, 1] = -r2 * m * q_over_s * sn
        out[2 * m, 0] = r2 * dQ[m] * sn
        out[2 * m, 1] = r2 * m * q_over_s * c
    return out


def sph_harm_gradient(n: int, k: int, point: SpherePoint) -> TangentVector:
    _check_level(n, k)
    if k == 1:
        Q = assoc_legendre_normalized(n, point.theta)
        dQ = _assoc_legendre_dtheta(n, Q)
        return TangentVector(float(dQ[0]), 0.0)
    if point.is_pole:
        raise DomainError("the (e_theta, e_phi) frame is singular at the poles")
    g = sph_harm_gradient_level(n, point.theta, point.phi)[k - 1]
    return TangentVector(float(g[0]), float(g[1]))


def random_points(count: int, seed: int, pole_margin: float = 0.0) -> list[SpherePoint]:
    """Uniformly distributed points, optionally kept ``pole_margin`` away from the poles."""
    rng = np.random.default_rng(seed)
    zmax = math.cos(pole_margin)
    z = rng.uniform(-zmax, zmax, count)
    phi = rng.uniform(0, _TWO_PI, count)
    return [SpherePoint(float(math.acos(zi)), float(p)) for zi, p in zip(z, phi)]


def identity_residuals(
    n: int,
    sample_points: Sequence[SpherePoint],
    partner_points: Optional[Sequence[SpherePoint]] = None,
    max_level: int = MAX_LEVEL,
) -> tuple[float, float, float]:
    """Largest absolute residuals of the three level-``n`` identities on S^2.

    Returns ``(scalar, gradient, addition)`` for

    * ``sum_k Y_n^k(s)^2 = (2n+1) / (4 pi)``
    * ``sum_k |grad Y_n^k(s)|^2 = n(n+1)(2n+1) / (4 pi)`` (pole samples skipped)
    * ``sum_k Y_n^k(s) Y_n^k(s0) = (2n+1) / (4 pi) P_n(s . s0)``

    ``s0`` defaults to the sample list rotated by one.
    """
    _check_level(n)
    if n > max_level:
        raise DomainError(f"level {n} exceeds the configured maximum {max_level}")
    if len(sample_points) == 0:
        return 0.0, 0.0, 0.0
    if partner_points is None:
        partner_points = list(sample_points[1:]) + list(sample_points[:1])
    theta = np.array([p.theta for p in sample_points])
    phi = np.array([p.phi for p in sample_points])
    k_over_area = multiplicity(3, n) / (4 * math.pi)

    Y = real_sph_harm_level(n, theta, phi)
    scalar = float(np.max(np.abs(np.sum(Y * Y, axis=0) - k_over_area)))

    interior = np.array([not p.is_pole for p in sample_points])
    grad = 0.0
    if np.any(interior):
        G = sph_harm_gradient_level(n, theta[interior], phi[interior])
        total = np.sum(G * G, axis=(0, 1))
        grad = float(np.max(np.abs(total - n * (n + 1) * k_over_area)))

    theta0 = np.array([p.theta for p in partner_points])
    phi0 = np.array([p.phi for p in partner_points])
    Y0 = real_sph_harm_level(n, theta0, phi0)
    s = np.stack([p.unit_vector() for p in sample_points])
    s0 = np.stack([p.unit_vector() for p in partner_points])
    cosg = np.clip(np.sum(s * s0, axis=1), -1.0, 1.0)
    add = float(np.max(np.abs(np.sum(Y * Y0, axis=0) - k_over_area * legendre_poly(n, cosg))))
    return scalar, grad, add
