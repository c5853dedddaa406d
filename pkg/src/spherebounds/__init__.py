"""Eigenvalue bounds on spheres: exact ladder combinatorics, Riesz means and their
convex conjugates, bound verification, spherical harmonics and a cap eigensolver."""
from .bounds import BoundFamily, BoundReport, bound_value, verify_spectrum
from .capsolver import Boundary, CapSpec, CapSpectrum, cap_spectrum, hemisphere_reference
from .conjugate import F_S2_conjugate, conjugate_piecewise, eigen_sum_transform
from .errors import (
    ConjugateTruncationError,
    DimensionMismatchError,
    DomainError,
    NumericalFailure,
    SpectrumError,
)
from .riesz import PiecewiseLinearConvex, build_F_piecewise, riesz_rhs
from .spectrum import DomainSpec, classical_constant, eigenvalue, multiplicity

__version__ = "0.1.0"
