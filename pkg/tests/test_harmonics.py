import math

import numpy as np
import pytest
from scipy import special

from spherebounds.errors import DomainError
from spherebounds.harmonics import (
    SpherePoint,
    TangentVector,
    addition_kernel,
    assoc_legendre_normalized,
    gegenbauer,
    identity_residuals,
    legendre_poly,
    random_points,
    real_sph_harm,
    real_sph_harm_level,
    sph_harm_gradient,
    sph_harm_gradient_level,
)
from spherebounds.spectrum import multiplicity, sphere_area

SEED = 20240611


def scipy_real_harmonic(n, k, theta, phi):
    """Independent route through scipy's complex harmonics (Condon-Shortley phase)."""
    if k == 1:
        return special.sph_harm_y(n, 0, theta, phi).real
    m = k // 2
    y = special.sph_harm_y(n, m, theta, phi)
    sign = (-1) ** m
    return math.sqrt(2) * sign * (y.real if k % 2 == 0 else y.imag)


def test_legendre_examples():
    for n in range(12):
        assert legendre_poly(n, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert legendre_poly(2, 0.0) == -0.5
    x, w = np.polynomial.legendre.leggauss(20)
    assert abs(np.sum(w * legendre_poly(5, x) * legendre_poly(3, x))) < 1e-12


def test_legendre_matches_scipy():
    t = np.linspace(-1, 1, 201)
    for n in range(40):
        np.testing.assert_allclose(legendre_poly(n, t), special.eval_legendre(n, t), atol=1e-12)


def test_legendre_rejects():
    with pytest.raises(DomainError):
        legendre_poly(3, 1.5)


def test_gegenbauer_examples():
    assert gegenbauer(0.7, 0, 0.3) == 1.0
    assert gegenbauer(0.5, 3, 0.5) == pytest.approx(-0.4375, abs=1e-15)
    assert legendre_poly(3, 0.5) == pytest.approx(-0.4375, abs=1e-15)
    with pytest.raises(DomainError):
        gegenbauer(0.0, 2, 0.1)


def test_gegenbauer_generating_function():
    lam, t, r = 1.0, 0.3, 0.4
    series = sum(gegenbauer(lam, n, t) * r ** n for n in range(41))
    assert abs(series - (1 - 2 * r * t + r * r) ** (-lam)) < 1e-10


def test_gegenbauer_half_is_legendre():
    t = np.linspace(-1, 1, 301)
    for n in range(31):
        np.testing.assert_allclose(gegenbauer(0.5, n, t), legendre_poly(n, t), atol=1e-12)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5, 2.5])
def test_gegenbauer_matches_scipy(lam):
    t = np.linspace(-1, 1, 101)
    for n in range(25):
        np.testing.assert_allclose(gegenbauer(lam, n, t), special.eval_gegenbauer(n, lam, t),
                                   rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize("d", range(3, 9))
def test_addition_kernel_diagonal_is_multiplicity(d):
    for n in range(15):
        assert addition_kernel(d, n, 1.0) == pytest.approx(multiplicity(d, n) / sphere_area(d), rel=1e-12)


def test_sphere_point_canonicalisation():
    assert SpherePoint(0.0, 2.0).phi == 0.0
    assert SpherePoint(1.0, -1.0).phi == pytest.approx(2 * math.pi - 1.0)
    with pytest.raises(DomainError):
        SpherePoint(4.0, 0.0)


def test_real_harmonic_examples():
    pts = random_points(5, SEED)
    for p in pts:
        assert real_sph_harm(0, 1, p) == pytest.approx(1 / math.sqrt(4 * math.pi), rel=1e-15)
    with pytest.raises(DomainError):
        real_sph_harm(2, 6, pts[0])


def test_real_harmonics_match_scipy():
    pts = random_points(50, SEED)
    th = np.array([p.theta for p in pts])
    ph = np.array([p.phi for p in pts])
    for n in range(0, 21):
        Y = real_sph_harm_level(n, th, ph)
        for k in range(1, 2 * n + 2):
            np.testing.assert_allclose(Y[k - 1], scipy_real_harmonic(n, k, th, ph), atol=1e-12)


def test_level_one_closed_form():
    c = math.sqrt(3 / (4 * math.pi))
    for p in [SpherePoint(0.0), SpherePoint(math.pi / 2, 0.3), SpherePoint(math.pi)]:
        Y = real_sph_harm_level(1, p.theta, p.phi)
        want = c * np.array([math.cos(p.theta), math.sin(p.theta) * math.cos(p.phi),
                             math.sin(p.theta) * math.sin(p.phi)])
        np.testing.assert_allclose(Y, want, atol=1e-15)
        assert abs(np.sum(Y * Y) - 3 / (4 * math.pi)) < 1e-14


def test_orthonormality_gram_matrix():
    x, wx = np.polynomial.legendre.leggauss(32)
    nphi = 64
    phi = np.arange(nphi) * 2 * math.pi / nphi
    TH, PH = np.meshgrid(np.arccos(x), phi, indexing="ij")
    W = np.outer(wx, np.full(nphi, 2 * math.pi / nphi))
    rows = [real_sph_harm_level(n, TH, PH) for n in range(11)]
    basis = np.concatenate(rows, axis=0).reshape(121, -1)
    gram = (basis * W.ravel()) @ basis.T
    assert np.max(np.abs(gram - np.eye(121))) < 1e-10


def test_gradient_examples():
    p = SpherePoint(0.7, 1.1)
    g = sph_harm_gradient(0, 1, p)
    assert g == TangentVector(0.0, 0.0)
    # scalar identity is frame-free, gradient of m >= 1 modes is not
    assert sph_harm_gradient(3, 1, SpherePoint(0.0)).v_phi == 0.0
    with pytest.raises(DomainError):
        sph_harm_gradient(3, 2, SpherePoint(0.0))


def test_gradient_matches_finite_differences():
    h = 1e-5
    pts = random_points(30, SEED + 1, pole_margin=0.1)
    for n in (1, 2, 5, 9):
        for p in pts:
            G = sph_harm_gradient_level(n, p.theta, p.phi)
            up = real_sph_harm_level(n, p.theta + h, p.phi)
            dn = real_sph_harm_level(n, p.theta - h, p.phi)
            east = real_sph_harm_level(n, p.theta, p.phi + h)
            west = real_sph_harm_level(n, p.theta, p.phi - h)
            fd_theta = (up - dn) / (2 * h)
            fd_phi = (east - west) / (2 * h) / math.sin(p.theta)
            scale = math.sqrt(n * (n + 1) * (2 * n + 1) / (4 * math.pi))
            np.testing.assert_allclose(G[:, 0], fd_theta, rtol=0, atol=1e-6 * scale)
            np.testing.assert_allclose(G[:, 1], fd_phi, rtol=0, atol=1e-6 * scale)


def test_identity_sums_at_examples():
    pts = random_points(200, SEED)
    for n in range(31):
        th = np.array([p.theta for p in pts])
        ph = np.array([p.phi for p in pts])
        Y = real_sph_harm_level(n, th, ph)
        assert np.max(np.abs(np.sum(Y * Y, axis=0) - (2 * n + 1) / (4 * math.pi))) < 1e-10


def test_identity_residuals_examples():
    pts = random_points(100, SEED)
    assert max(identity_residuals(0, pts)) < 1e-14
    assert max(identity_residuals(10, pts)) < 1e-10
    s, _, _ = identity_residuals(1, [SpherePoint(0.0), SpherePoint(math.pi / 2, 0.0)])
    assert s < 1e-14
    with pytest.raises(DomainError):
        identity_residuals(31, pts)


def test_scalar_identity_holds_at_poles():
    pts = [SpherePoint(0.0), SpherePoint(math.pi)]
    for n in range(31):
        s, g, a = identity_residuals(n, pts)
        assert s < 1e-10 and a < 1e-10
        assert g == 0.0


def test_identities_over_random_points():
    pts = random_points(200, SEED, pole_margin=1e-3)
    for n in range(31):
        s, g, a = identity_residuals(n, pts)
        assert s < 1e-10
        assert a < 1e-10
        if n <= 20:
            assert g < 1e-8


def test_perp_gradient_isometry_and_vector_identity():
    pts = random_points(200, SEED + 2, pole_margin=1e-3)
    for n in range(1, 21):
        lam = n * (n + 1)
        w_total = np.zeros(len(pts))
        v_total = np.zeros(len(pts))
        for j, p in enumerate(pts):
            for k in range(1, 2 * n + 2):
                g = sph_harm_gradient(n, k, p)
                assert abs(g.perp().norm2 - g.norm2) < 1e-13
                w_total[j] += g.perp().norm2 / lam
                v_total[j] += g.norm2 / lam
        target = (2 * n + 1) / (4 * math.pi)
        assert np.max(np.abs(w_total - target)) < 1e-10
        assert np.max(np.abs(v_total - target)) < 1e-10


def test_assoc_legendre_high_degree_finite():
    Q = assoc_legendre_normalized(60, np.linspace(0, math.pi, 50))
    assert np.all(np.isfinite(Q))
