import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar
from hypothesis import given, settings, strategies as st

from spherebounds.errors import DomainError
from spherebounds.riesz import (
    F_S2_segment,
    F_prime_S2,
    PiecewiseLinearConvex,
    build_F_piecewise,
    classical_gap,
    fprime_discriminant,
    power_conjugate,
    riesz_lift,
    riesz_lift_residual,
    riesz_rhs,
    stokes_riesz_rhs,
    vector_riesz_classical,
    vector_riesz_rhs,
)
from spherebounds.spectrum import DomainSpec, classical_constant, f_closed, sphere_area

S2 = DomainSpec(3, 4 * math.pi)


def brute_riesz(d, area, lam, sigma=1.0, levels=200):
    """Sum over a fixed, generous number of levels with no truncation logic."""
    total = 0.0
    for n in range(levels):
        gap = lam - n * (n + d - 2)
        if gap > 0:
            k = math.comb(n + d - 1, n) - (math.comb(n + d - 3, n - 2) if n >= 2 else 0)
            total += gap ** sigma * k
    return area / sphere_area(d) * total


def test_riesz_rhs_examples():
    assert riesz_rhs(S2, 6.0) == pytest.approx(18.0, rel=1e-15)
    assert riesz_rhs(S2, 1.0) == pytest.approx(1.0, rel=1e-15)
    for sigma in (1.0, 1.5, 3.0):
        assert riesz_rhs(DomainSpec(5, 1.0), 0.0, sigma) == 0.0


def test_riesz_rhs_rejects():
    with pytest.raises(DomainError):
        riesz_rhs(S2, 1.0, sigma=0.5)
    with pytest.raises(DomainError):
        riesz_rhs(S2, -1.0)


@pytest.mark.parametrize("d", range(3, 9))
def test_riesz_rhs_matches_brute_force(d):
    rng = np.random.default_rng(d)
    dom = DomainSpec(d, 0.3 * sphere_area(d))
    for lam in rng.uniform(0, 400, 40):
        for sigma in (1.0, 2.0, 2.5):
            assert riesz_rhs(dom, lam, sigma) == pytest.approx(
                brute_riesz(d, dom.area, lam, sigma), rel=1e-12)


def test_build_F_examples():
    F = build_F_piecewise(S2, 12)
    assert F.breakpoints == [(0, 0), (2, 2), (6, 18), (12, 72)]
    small = build_F_piecewise(DomainSpec(3, 2.0), 1.5)
    assert small.breakpoints == [(0.0, 0.0)]
    assert small.tail_slope == pytest.approx(2.0 / (4 * math.pi), rel=1e-15)
    F4 = build_F_piecewise(DomainSpec.whole_sphere(4), 3)
    assert F4.breakpoints == [(0, 0), (3, 3)]


@pytest.mark.parametrize("d", range(3, 9))
def test_polyline_agrees_with_riesz_rhs(d):
    rng = np.random.default_rng(100 + d)
    dom = DomainSpec(d, 0.7 * sphere_area(d))
    F = build_F_piecewise(dom, 500)
    grid = np.concatenate([rng.uniform(0, F.domain_end, 300), F.xs])
    for lam in grid:
        ref = riesz_rhs(dom, lam)
        assert abs(F(lam) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_polyline_rejects_outside_domain():
    F = build_F_piecewise(S2, 12)
    assert F.domain_end == 20
    with pytest.raises(ValueError):
        F(20.5)


def test_polyline_validates_convexity():
    with pytest.raises(ValueError):
        PiecewiseLinearConvex((0, 1, 2), (0, 2, 3))
    with pytest.raises(ValueError):
        PiecewiseLinearConvex((0, 1, 1), (0, 1, 2))


def test_F_S2_segment_examples():
    for N in range(1, 12):
        lam = N * (N + 1)
        assert F_S2_segment(0.3, N, lam) == pytest.approx(0.3 * lam * lam, rel=1e-14)
    assert F_S2_segment(0.7, 1, 0.0) == 0.0
    assert F_S2_segment(0.5, 2, 4.0) == 10.0
    assert riesz_rhs(S2, 4.0) == (4 - 0) * 1 + (4 - 2) * 3
    with pytest.raises(DomainError):
        F_S2_segment(0.5, 2, 7.0)


def test_F_S2_segment_agrees_with_polyline():
    for area in (math.pi, 2 * math.pi, 4 * math.pi):
        alpha = area / (8 * math.pi)
        F = build_F_piecewise(DomainSpec(3, area), 31 * 32)
        for N in range(1, 31):
            for lam in np.linspace((N - 1) * N, N * (N + 1), 7):
                ref = F(lam)
                assert abs(F_S2_segment(alpha, N, lam) - ref) <= 1e-12 * max(1, ref)


def test_classical_gap_examples():
    for area in (1.0, 2 * math.pi):
        dom = DomainSpec(3, area)
        for N in range(0, 31):
            lam = N * (N + 1)
            assert abs(classical_gap(dom, lam)) <= 1e-12 * max(1.0, riesz_rhs(dom, lam))
    assert classical_gap(DomainSpec(6, 1.0), 0.0) == 0.0
    dom4 = DomainSpec.whole_sphere(4)
    # f_closed(4,1) = 3 ; parabola = L_{1,3} |S^3| 3^{5/2}
    expected = 3.0 - classical_constant(1, 3) * 2 * math.pi ** 2 * 3 ** 2.5
    assert classical_gap(dom4, 3.0) == pytest.approx(expected, rel=1e-13)
    assert expected > 0


def test_classical_gap_strict_in_higher_dimensions():
    for d in range(4, 9):
        dom = DomainSpec(d, 0.5 * sphere_area(d))
        for N in range(1, 31):
            lam = N * (N + d - 2)
            parabola = classical_constant(1, d - 1) * dom.area * lam ** ((d + 1) / 2)
            assert classical_gap(dom, lam) > 1e-9 * parabola


@settings(max_examples=200, deadline=None)
@given(d=st.integers(3, 8), frac=st.floats(0.01, 1.0), lam=st.floats(0, 2000))
def test_classical_gap_never_negative(d, frac, lam):
    dom = DomainSpec(d, frac * sphere_area(d))
    assert classical_gap(dom, lam) >= -1e-12 * max(1.0, riesz_rhs(dom, lam))


@settings(max_examples=100, deadline=None)
@given(d=st.integers(3, 8), sigma=st.floats(1.0, 4.0),
       a=st.floats(0, 500), b=st.floats(0, 500))
def test_riesz_rhs_monotone_and_midpoint_convex(d, sigma, a, b):
    dom = DomainSpec(d, 1.0)
    lo, hi = min(a, b), max(a, b)
    f_lo, f_hi = riesz_rhs(dom, lo, sigma), riesz_rhs(dom, hi, sigma)
    scale = 1e-12 * max(1.0, f_hi)
    assert f_lo <= f_hi + scale
    assert riesz_rhs(dom, (lo + hi) / 2, sigma) <= (f_lo + f_hi) / 2 + scale


def test_F_prime_examples():
    for alpha in (0.1, 0.25, 0.5):
        for N in range(1, 15):
            lam = N * (N + 1)
            assert F_prime_S2(alpha, lam) == pytest.approx(
                alpha * lam * lam - 2 * alpha * lam, rel=1e-13)
        for lam in np.linspace(0, 2, 9):
            assert F_prime_S2(alpha, lam) == 0.0
    assert F_prime_S2(0.5, 6.0) == 12.0
    assert 12.0 <= 0.5 * 36


def test_F_prime_below_parabola_dense():
    for alpha in (1 / 8, 1 / 4, 1 / 2):
        for lam in np.linspace(0, 3000, 10_000):
            val = F_prime_S2(alpha, lam)
            assert val <= alpha * lam * lam + 1e-12 * max(1.0, alpha * lam * lam)


def test_fprime_discriminant_exact():
    for N in range(1, 101):
        disc = fprime_discriminant(N)
        assert disc == -4 * (N * N - 1)
        assert disc <= 0


def test_lift_residual_examples():
    assert riesz_lift_residual(-3.0, 2.0) == 0.0
    assert riesz_lift_residual(0.0, 2.0) == 0.0
    assert riesz_lift_residual(1.0, 2.0) < 1e-10
    assert riesz_lift_residual(3.0, 3.0) < 1e-8
    with pytest.raises(DomainError):
        riesz_lift_residual(1.0, 1.0)


@pytest.mark.parametrize("sigma", [1.25, 1.5, 2.0, 2.5, 3.0])
def test_lift_residual_range(sigma):
    for E in np.linspace(-100, 100, 41):
        assert riesz_lift_residual(E, sigma) < 1e-8


def test_lift_residual_high_order_relative():
    # E^4 reaches 1e8 where one ulp is already ~1.5e-8
    for E in np.linspace(1, 100, 34):
        assert riesz_lift_residual(E, 4.0) < 1e-14 * E ** 4


def test_lift_reproduces_sigma_two():
    rng = np.random.default_rng(7)
    for lam in rng.uniform(0, 60, 20):
        direct = riesz_rhs(S2, lam, 2.0)
        assert abs(riesz_lift(S2, lam, 2.0) - direct) < 1e-7


def test_vector_and_stokes_majorants():
    area = 2.5
    for lam in np.linspace(0, 200, 101):
        assert vector_riesz_rhs(area, lam) == 2 * stokes_riesz_rhs(area, lam)
        assert vector_riesz_rhs(area, lam) <= vector_riesz_classical(area, lam) * (1 + 1e-12)
        assert vector_riesz_classical(area, lam) == 2 * (classical_constant(1, 2) * area * lam ** 2)


def test_power_conjugate_matches_discrete_sup():
    c, a = 0.37, 2.5
    for p in (0.0, 0.5, 3.0, 11.0):
        res = minimize_scalar(lambda x: c * x ** a - p * x, bounds=(0, 200),
                              method="bounded", options={"xatol": 1e-12})
        assert power_conjugate(c, a, p) == pytest.approx(-res.fun, rel=1e-9, abs=1e-12)
