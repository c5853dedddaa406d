"""Convex conjugation ``g^v(p) = sup_{x >= 0} (p x - g(x))`` for polylines.

The supremum of an affine family over a convex polyline is attained at a
vertex, so conjugates here are evaluated exactly on breakpoints; no
continuous optimisation is involved.
"""
from __future__ import annotations

import bisect
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import ConjugateTruncationError, DomainError, SpectrumError
from .riesz import PiecewiseLinearConvex

__all__ = [
    "ConjugateSegment",
    "conjugate_piecewise",
    "conjugate_polyline",
    "F_S2_conjugate",
    "F_S2_conjugate_lower",
    "F_S2_conjugate_segments",
    "eigen_sum_transform",
    "riesz_mean_polyline",
    "check_sorted",
]


@dataclass(frozen=True)
class ConjugateSegment:
    """``F^v(p) = a p + b`` for ``p`` in ``[p_lo, p_hi]``."""

    p_lo: float
    p_hi: float
    a: float
    b: float

    def __call__(self, p: float) -> float:
        return self.a * p + self.b


def conjugate_piecewise(F: PiecewiseLinearConvex, p: float) -> float:
    """Exact conjugate of a convex polyline at slope ``p``.

    Raises :class:`ConjugateTruncationError` when ``p`` exceeds every slope
    the polyline was built with and its domain is finite, since the true
    supremum then lies beyond the constructed part.
    """
    top = F.max_slope
    # slopes of derived polylines are difference quotients; forgive rounding
    if p > top + 1e-12 * max(1.0, abs(top)):
        if F.bounded:
            raise ConjugateTruncationError(
                f"p={p!r} exceeds the largest constructed slope {top!r}; "
                f"extend the polyline beyond x={F.domain_end!r}")
        return math.inf
    # vertex i is optimal for slopes between the segments on either side of it
    i = bisect.bisect_left(F.slopes, p)
    lo, hi = max(i - 1, 0), min(i + 1, len(F.xs) - 1)
    return max(p * F.xs[j] - F.ys[j] for j in range(lo, hi + 1))


def conjugate_polyline(F: PiecewiseLinearConvex) -> PiecewiseLinearConvex:
    """Conjugate of ``F`` as a polyline in ``p`` on ``[0, F.max_slope]``."""
    chain = list(F.slopes)
    if F.tail_slope is not None:
        chain.append(F.tail_slope)
    if not chain or chain[-1] <= 0:
        raise DomainError("conjugate polyline needs at least one positive slope")
    ps = [0.0] + sorted({c for c in chain if c > 0})
    return PiecewiseLinearConvex(tuple(ps), tuple(conjugate_piecewise(F, p) for p in ps))


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha <= 0.5:
        raise DomainError(f"alpha must lie in (0, 1/2], got {alpha!r}")


def _junction(alpha: float, N: int) -> float:
    return 2 * alpha * (N * N)


def _segment_index(alpha: float, p: float) -> int:
    """Smallest N >= 1 with ``p <= 2 alpha N^2`` (left segment at junctions)."""
    N = max(1, math.ceil(math.sqrt(p / (2 * alpha))))
    while N > 1 and _junction(alpha, N - 1) >= p:
        N -= 1
    while _junction(alpha, N) < p:
        N += 1
    return N


def F_S2_conjugate(alpha: float, p: float) -> float:
    """Closed form ``N(N-1)(p - alpha N(N-1))`` on ``p in [2 alpha (N-1)^2, 2 alpha N^2]``."""
    _check_alpha(alpha)
    if p < 0:
        raise DomainError(f"p must be >= 0, got {p!r}")
    N = _segment_index(alpha, p)
    m = N * (N - 1)
    return m * (p - alpha * m)


def F_S2_conjugate_segments(alpha: float, n_segments: int) -> list[ConjugateSegment]:
    _check_alpha(alpha)
    out = []
    for N in range(1, n_segments + 1):
        m = N * (N - 1)
        out.append(ConjugateSegment(_junction(alpha, N - 1), _junction(alpha, N),
                                    float(m), -alpha * m * m))
    return out


def F_S2_conjugate_lower(alpha: float, p: float) -> float:
    """Parabola ``p (p - 2 alpha) / (4 alpha)`` lying under the S^2 conjugate."""
    _check_alpha(alpha)
    return p * (p - 2 * alpha) / (4 * alpha)


def check_sorted(spectrum: Sequence[float]) -> None:
    for j in range(1, len(spectrum)):
        if spectrum[j] < spectrum[j - 1]:
            raise SpectrumError(
                f"spectrum must be non-decreasing; entry {j + 1} "
                f"({spectrum[j]!r}) < entry {j} ({spectrum[j - 1]!r})")


def eigen_sum_transform(spectrum: Sequence[float], p: float) -> float:
    """Conjugate of ``lambda -> sum_j (lambda - mu_j)_+`` at ``p``.

    ``(p - [p]) mu_{[p]+1} + sum_{k <= [p]} mu_k``; for integer ``p = n`` this
    is the sum of the first ``n`` eigenvalues.
    """
    if p < 0:
        raise DomainError(f"p must be >= 0, got {p!r}")
    check_sorted(spectrum)
    k = math.floor(p)
    frac = p - k
    need = k + 1 if frac > 0 else k
    if len(spectrum) < need:
        raise SpectrumError(
            f"eigenvalue index {need} is required for p={p!r} but the "
            f"spectrum has only {len(spectrum)} entries")
    total = math.fsum(spectrum[:k])
    if frac > 0:
        total += frac * spectrum[k]
    return total


def riesz_mean_polyline(eigenvalues: Sequence[float],
                        domain_end: float = math.inf) -> PiecewiseLinearConvex:
    """Polyline of ``lambda -> sum_j (lambda - mu_j)_+`` for a finite list.

    Order of the input is irrelevant; repeated values merge into one corner.
    """
    if len(eigenvalues) == 0:
        raise SpectrumError("empty spectrum")
    counts = Counter(float(v) for v in eigenvalues)
    values = sorted(counts)
    if values[0] < 0:
        raise SpectrumError(f"negative eigenvalue {values[0]!r}")
    xs, ys = [], []
    if values[0] > 0:
        xs.append(0.0)
        ys.append(0.0)
    below = 0
    y = 0.0
    prev = values[0]
    for v in values:
        y += below * (v - prev)
        xs.append(v)
        ys.append(y)
        below += counts[v]
        prev = v
    return PiecewiseLinearConvex(tuple(xs), tuple(ys), float(len(eigenvalues)), domain_end)
