"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatchError(DomainError):
    """A bound family was applied in a dimension it is not stated for."""


class SpectrumError(ValueError):
    """A supplied eigenvalue list is unsorted or too short."""


class ConjugateTruncationError(ValueError):
    """The conjugate's supremum lies beyond the constructed part of a polyline."""


class NumericalFailure(RuntimeError):
    """A quadrature or eigenvalue refinement did not reach its tolerance."""
