"""Dirichlet and Neumann eigenvalues of geodesic caps ``{theta < theta0}`` on S^2.

Separating ``u = w(theta) cos(m phi)`` (or ``sin``) leaves, per azimuthal
index ``m``, the Sturm-Liouville problem

    -(1/sin t)(sin t w')' + m^2/sin^2 t w = lambda w   on (0, theta0)

with regularity at the pole.  Each mode is discretised by a finite-volume
scheme on a uniform vertex mesh; the discrete problem is a symmetric
tridiagonal matrix whose eigenvalues are isolated by Sturm-sequence
bisection, so the discrete count below any threshold is exact.  Three
nested meshes give two Richardson extrapolants; twice their difference,
plus a roundoff floor, is the reported error bound.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NumericalFailure

__all__ = [
    "Boundary",
    "CapSpec",
    "CapEntry",
    "CapSpectrum",
    "mode_eigenvalues",
    "cap_spectrum",
    "cap_spectrum_at_least",
    "hemisphere_reference",
    "TARGET_RTOL",
]

TARGET_RTOL = 1e-7
_MIN_CELLS = 200
_CELLS_PER_WAVELENGTH = 25
_MAX_DOUBLINGS = 4
_BISECTION_TOL = 1e-300
# reported bound = safety factor * |difference of extrapolants| + roundoff floor
_SAFETY = 2.0
_ROUNDOFF_RTOL = 1e-10


class Boundary(str, enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CapSpec:
    theta0: float
    bc: Boundary

    def __post_init__(self):
        if not 0 < self.theta0 < math.pi:
            raise DomainError(f"aperture must lie in (0, pi), got {self.theta0!r}")
        object.__setattr__(self, "bc", Boundary(self.bc))

    @property
    def area(self) -> float:
        return 2 * math.pi * (1 - math.cos(self.theta0))


@dataclass(frozen=True)
class CapEntry:
    eigenvalue: float
    m: int
    radial_index: int
    error_bound: float
    label: str  # "cos" or "sin" for m >= 1, "radial" for m = 0


@dataclass
class CapSpectrum:
    cap: CapSpec
    lambda_max: float
    entries: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[CapEntry]:
        return iter(self.entries)

    @property
    def eigenvalues(self) -> list[float]:
        return [e.eigenvalue for e in self.entries]

    @property
    def error_bounds(self) -> list[float]:
        return [e.error_bound for e in self.entries]

    def records(self) -> list[dict]:
        return [
            {"index": i, "eigenvalue": e.eigenvalue, "m": e.m,
             "radial_index": e.radial_index, "error_bound": e.error_bound}
            for i, e in enumerate(self.entries, start=1)
        ]


def _flatten(cap: CapSpec, lambda_max: float, modes: dict) -> CapSpectrum:
    rows = []
    for m, values in modes.items():
        labels = ("radial",) if m == 0 else ("cos", "sin")
        for r, (lam, err) in enumerate(values, start=1):
            for lab in labels:
                rows.append(CapEntry(lam, m, r, err, lab))
    rows.sort(key=lambda e: (e.eigenvalue, e.m, e.radial_index, e.label != "cos"))
    return CapSpectrum(cap, lambda_max, rows)


def _tridiagonal(cap: CapSpec, m: int, cells: int):
    """Diagonal and off-diagonal of ``M^{-1/2} K M^{-1/2}`` on ``cells`` cells."""
    h = cap.theta0 / cells
    nodes = np.arange(cells + 1) * h
    faces = (np.arange(cells) + 0.5) * h
    flux = np.sin(faces) / h
    edges = np.concatenate([[0.0], faces, [cap.theta0]])
    # cos(a) - cos(b) without cancellation
    mass = 2 * np.sin((edges[1:] + edges[:-1]) / 2) * np.sin((edges[1:] - edges[:-1]) / 2)

    stiff = np.zeros(cells + 1)
    stiff[:-1] += flux
    stiff[1:] += flux
    if m:
        # node potential m^2/sin^2 lumped over the dual cell; the pole is excluded
        stiff[1:] += m * m * mass[1:] / np.sin(nodes[1:]) ** 2

    lo = 1 if m else 0
    hi = cells if cap.bc is Boundary.DIRICHLET else cells + 1
    inv_root = 1 / np.sqrt(mass[lo:hi])
    diag = stiff[lo:hi] * inv_root ** 2
    off = -flux[lo:hi - 1] * inv_root[:-1] * inv_root[1:]
    return diag, off


def _discrete(cap: CapSpec, m: int, cells: int, count: int) -> np.ndarray:
    diag, off = _tridiagonal(cap, m, cells)
    # bisect to full relative accuracy; the default stops at eps * ||T||
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                            select_range=(0, count - 1), lapack_driver="stebz",
                            tol=_BISECTION_TOL)


def _discrete_count_below(cap: CapSpec, m: int, cells: int, threshold: float) -> int:
    diag, off = _tridiagonal(cap, m, cells)
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="v",
                            select_range=(-1.0, threshold), lapack_driver="stebz")
    return len(vals)


def _base_cells(cap: CapSpec, lambda_max: float) -> int:
    return max(_MIN_CELLS, math.ceil(_CELLS_PER_WAVELENGTH * cap.theta0 * math.sqrt(lambda_max)))


def mode_eigenvalues(cap: CapSpec, m: int, lambda_max: float) -> list[tuple[float, float]]:
    """Eigenvalues ``<= lambda_max`` of azimuthal mode ``m`` with error bounds.

    Raises :class:`NumericalFailure` when the error bound stays above
    ``TARGET_RTOL * max(1, lambda)`` after the refinement budget.
    """
    if not lambda_max > 0:
        raise DomainError(f"lambda_max must be > 0, got {lambda_max!r}")
    if not isinstance(m, int) or m < 0:
        raise DomainError(f"azimuthal index must be a non-negative integer, got {m!r}")
    cells = _base_cells(cap, lambda_max)
    # discrete eigenvalues approach from below, so the coarse count cannot miss one
    count = _discrete_count_below(cap, m, cells, lambda_max * 1.05 + 1.0)
    if count == 0:
        return []

    for attempt in range(_MAX_DOUBLINGS + 1):
        if attempt:
            cells *= 2
        l1, l2, l4 = (_discrete(cap, m, c, count) for c in (cells, 2 * cells, 4 * cells))
        r_coarse = (4 * l2 - l1) / 3
        r_fine = (4 * l4 - l2) / 3
        err = _SAFETY * np.abs(r_fine - r_coarse) + _ROUNDOFF_RTOL * np.maximum(1.0, np.abs(r_fine))
        if np.all(err <= TARGET_RTOL * np.maximum(1.0, np.abs(r_fine))):
            break
    else:
        worst = int(np.argmax(err / np.maximum(1.0, np.abs(r_fine))))
        raise NumericalFailure(
            f"cap theta0={cap.theta0!r} {cap.bc} mode m={m}: eigenvalue #{worst + 1} "
            f"(~{r_fine[worst]:.10g}) did not converge; error estimate {err[worst]:.3g} "
            f"after {4 * cells} cells")

    out = []
    for j, (lam, e) in enumerate(zip(r_fine, err)):
        lam, e = float(lam), float(e)
        if m == 0 and j == 0 and cap.bc is Boundary.NEUMANN:
            lam, e = 0.0, 0.0  # constant mode
        if lam <= lambda_max:
            out.append((lam, e))
    return out


def cap_spectrum(cap: CapSpec, lambda_max: float) -> CapSpectrum:
    """All eigenvalues ``<= lambda_max``; modes ``m >= 1`` appear twice (cos, sin)."""
    if not lambda_max > 0:
        raise DomainError(f"lambda_max must be > 0, got {lambda_max!r}")
    modes = {}
    m = 0
    while True:
        values = mode_eigenvalues(cap, m, lambda_max)
        if not values:
            # the lowest eigenvalue of a mode increases with m
            break
        modes[m] = values
        m += 1
    return _flatten(cap, lambda_max, modes)


def cap_spectrum_at_least(cap: CapSpec, count: int) -> CapSpectrum:
    """Smallest spectrum from a growing ``lambda_max`` that holds ``count`` entries."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count!r}")
    # Weyl: N(lambda) ~ |Omega| lambda / (4 pi); Dirichlet lags by a boundary term
    lam = 1.5 * 4 * math.pi * count / cap.area + 10.0
    while True:
        spec = cap_spectrum(cap, lam)
        if len(spec) >= count:
            return spec
        lam *= 1.5


def hemisphere_reference(bc: Boundary | str, lambda_max: float) -> CapSpectrum:
    """Exact hemisphere spectrum from the sphere ladder.

    Harmonics of level ``n`` that are odd under the equatorial reflection
    (``n - m`` odd) satisfy the Dirichlet condition, the even ones the
    Neumann condition.
    """
    cap = CapSpec(math.pi / 2, bc)
    parity = 1 if cap.bc is Boundary.DIRICHLET else 0
    modes: dict = {}
    n = 0
    while n * (n + 1) <= lambda_max:
        for m in range(n + 1):
            if (n - m) % 2 == parity:
                modes.setdefault(m, []).append((float(n * (n + 1)), 0.0))
        n += 1
    return _flatten(cap, lambda_max, dict(sorted(modes.items())))
