import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ingham.ball import (
    LANDAU_C,
    CertificationError,
    UnsupportedOrderError,
    alpha_m_plus_1,
    ball_transform_g,
    ball_volume,
    bessel_j,
    bessel_j_scaled,
    certify_alpha_m_plus_1,
    dirichlet_mu,
    eigen_profile,
    first_bessel_zero,
    fourier_h,
    min_h_squared,
    one_minus_g,
)
from oracles import (
    ball_cos_integral,
    bessel_series,
    bessel_zero_bisection,
    eigen_profile_closed,
    integrate_1d,
    radial_fd_eigenvalue,
)

J01 = 2.4048255576957724  # bisection on the J_0 series


# -- Bessel layer ---------------------------------------------------------------


def test_bessel_half_order_closed_form():
    assert bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, abs=1e-15)
    assert bessel_j(0, 0.0) == 1.0
    assert abs(bessel_j(0, 2.404825557695773)) < 1e-12


@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 1.5, 2.5, 4.0])
def test_bessel_against_series(nu):
    rng = np.random.default_rng(int(10 * nu) + 7)
    for x in rng.uniform(0, 30, 12):
        assert bessel_j(nu, x) == pytest.approx(bessel_series(nu, x, dps=60), abs=1e-12)


@pytest.mark.parametrize("x", [150.0, 199.0])
def test_bessel_large_argument(x):
    assert bessel_j(1.5, x) == pytest.approx(bessel_series(1.5, x, dps=120), abs=1e-12)


def test_bessel_scaled_limit_and_continuity():
    for nu in (-0.5, 0.0, 1.5, 3.0):
        assert bessel_j_scaled(nu, 0.0) == pytest.approx(1 / (2**nu * math.gamma(nu + 1)), rel=1e-15)
        # series / direct branches agree across the switch
        a = bessel_j_scaled(nu, 4.0)
        b = bessel_j(nu, 4.0 + 1e-12) / (4.0 + 1e-12) ** nu
        assert a == pytest.approx(b, rel=1e-10)


def test_unsupported_order():
    with pytest.raises(UnsupportedOrderError):
        bessel_j(-1.0, 1.0)
    with pytest.raises(UnsupportedOrderError):
        first_bessel_zero(-0.75)


def test_first_zero_examples():
    assert first_bessel_zero(-0.5) == math.pi / 2
    assert first_bessel_zero(0.5) == math.pi
    assert first_bessel_zero(0) == pytest.approx(J01, abs=1e-11)


@pytest.mark.parametrize("nu", [1.0, 1.5, 2.0, 4.0, 7.5])
def test_first_zero_against_bisection(nu):
    z = first_bessel_zero(nu)
    ref = bessel_zero_bisection(nu, z - 0.05, z + 0.05, tol=1e-13)
    assert z == pytest.approx(ref, abs=1e-11)
    # no sign change before it
    grid = np.linspace(1e-3, z - 1e-3, 400)
    assert np.all(bessel_j(nu, grid) > 0)


def test_first_zero_high_order():
    z = first_bessel_zero(50.0)
    assert abs(bessel_j(50.0, z)) < 1e-12 and 55 < z < 60


# -- eigenvalue and eigenfunction ------------------------------------------------


def test_dirichlet_mu_closed_forms():
    assert dirichlet_mu(1) == math.pi**2 / 4
    assert dirichlet_mu(3) == math.pi**2
    assert dirichlet_mu(2) == pytest.approx(5.783185962946783, rel=1e-14)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_dirichlet_mu_finite_differences(N):
    assert dirichlet_mu(N) == pytest.approx(radial_fd_eigenvalue(N), rel=1e-6)


def test_dirichlet_mu_range():
    with pytest.raises(ValueError):
        dirichlet_mu(11)


def test_profile_n1_is_cosine():
    w = eigen_profile(1)
    rho = np.linspace(0, 1, 50)
    assert w.profile(rho) == pytest.approx(np.cos(np.pi * rho / 2), abs=1e-14)


@pytest.mark.parametrize("N", range(1, 11))
def test_profile_positive_zero_at_boundary(N):
    w = eigen_profile(N)
    rho = np.linspace(0, 0.999, 300)
    assert np.all(w.profile(rho) > 0)
    assert abs(w.profile(1.0)) < 1e-14
    assert w.profile(1.5) == 0.0
    assert w.radial_integral(lambda r: w.profile(r) ** 2) == pytest.approx(1.0, abs=1e-10)
    assert w.h_at_zero > 0


@pytest.mark.parametrize("N", [1, 2, 3])
def test_profile_matches_closed_form(N):
    w = eigen_profile(N)
    H = eigen_profile_closed(N)
    rho = np.linspace(0, 1, 40)
    assert w.profile(rho) == pytest.approx(H(rho), abs=1e-13)
    # normalization by independent quadrature
    assert ball_cos_integral(N, [0.0] * N, 1.0, lambda r: H(r) ** 2) == pytest.approx(1.0, abs=1e-10)


# -- Fourier transform h -----------------------------------------------------------


def test_h_n1_values():
    w = eigen_profile(1)
    assert fourier_h(w, 0.0) == pytest.approx(4 / math.pi, abs=1e-12)
    # direct Gauss-Legendre of int cos(pi x / 2) cos(x t) dx
    ref = integrate_1d(lambda x: np.cos(np.pi * x / 2) * np.cos(x * math.pi / 4), -1, 1)
    assert ref == pytest.approx(1.2004217548761416, abs=1e-14)
    assert fourier_h(w, math.pi / 4) == pytest.approx(ref, abs=1e-9)


@pytest.mark.parametrize("N", range(1, 8))
def test_h_at_zero_is_mass(N):
    w = eigen_profile(N)
    assert fourier_h(w, 0.0) == pytest.approx(w.h_at_zero, abs=1e-10)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_h_radial_reduction_matches_tensor_quadrature(N):
    w = eigen_profile(N)
    H = eigen_profile_closed(N)
    rng = np.random.default_rng(N)
    for t in rng.uniform(0, 12, 8):
        ref = ball_cos_integral(N, [t] + [0.0] * (N - 1), 1.0, H, n=160)
        assert fourier_h(w, t) == pytest.approx(ref, abs=1e-8)


def test_h_large_argument_accuracy():
    # N = 1 closed form: h(t) = pi cos t / ((pi/2)^2 - t^2)
    w = eigen_profile(1)
    t = np.array([10.3, 101.7, 800.2])
    exact = math.pi * np.cos(t) / ((math.pi / 2) ** 2 - t**2)
    assert fourier_h(w, t) == pytest.approx(exact, abs=1e-9)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_scaling_law(N):
    # h_s(t) = s^N h(s t) for H_s(x) = H(x/s); compare with direct quadrature of H_s
    w = eigen_profile(N)
    H = eigen_profile_closed(N)
    rng = np.random.default_rng(100 + N)
    for s, t in zip(rng.uniform(0.2, 3, 7), rng.uniform(0, 6, 7)):
        direct = ball_cos_integral(N, [t] + [0.0] * (N - 1), s, lambda r: H(r / s), n=160)
        assert direct == pytest.approx(s**N * fourier_h(w, s * t), abs=1e-8 * max(1, s**N))
        norm_s = ball_cos_integral(N, [0.0] * N, s, lambda r: H(r / s) ** 2)
        assert norm_s == pytest.approx(s**N, rel=1e-10)


def test_min_h_squared_n1():
    # h is decreasing on [0, pi/2] for N = 1 and h(pi/2) = 1
    w = eigen_profile(1)
    grid = np.linspace(0, math.pi / 2, 2001)
    h = math.pi * np.cos(grid[:-1]) / ((math.pi / 2) ** 2 - grid[:-1] ** 2)
    assert np.all(np.diff(h) < 0)
    assert min_h_squared(w) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("N", [1, 2, 3, 6, 10])
def test_min_h_squared_positive_and_converged(N):
    w = eigen_profile(N)
    a = min_h_squared(w, step=1e-3)
    b = min_h_squared(w, step=5e-4)
    assert a > 0
    assert abs(a - b) < 1e-8


# -- ball transform g ----------------------------------------------------------------


def test_g_examples():
    rho = np.linspace(0.1, 20, 50)
    assert ball_transform_g(1, rho) == pytest.approx(np.sin(rho) / rho, abs=1e-14)
    assert abs(ball_transform_g(1, math.pi)) < 1e-15
    for N in range(1, 11):
        assert ball_transform_g(N, 0.0) == pytest.approx(1.0, abs=1e-15)
    ref = ball_cos_integral(2, [1.0, 0.0], 1.0) / math.pi
    assert ref == pytest.approx(0.880101171489867, abs=1e-12)
    assert ball_transform_g(2, 1.0) == pytest.approx(ref, abs=1e-6)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_g_matches_quadrature(N):
    rng = np.random.default_rng(7 + N)
    for rho in rng.uniform(0, 25, 20):
        ref = ball_cos_integral(N, [rho] + [0.0] * (N - 1), 1.0, n=160) / ball_volume(N)
        assert ball_transform_g(N, rho) == pytest.approx(ref, abs=1e-9)


@given(st.integers(1, 10), st.floats(0, 200))
def test_g_bounded(N, rho):
    assert abs(ball_transform_g(N, rho)) <= 1 + 1e-15


@pytest.mark.parametrize("N", [1, 2, 5, 10])
def test_one_minus_g_taylor(N):
    rho = np.array([1e-6, 1e-4, 1e-2])
    assert one_minus_g(N, rho) / rho**2 == pytest.approx(1 / (2 * N + 4), rel=1e-3)
    # continuous across the series cutoff
    assert one_minus_g(N, 4.0) == pytest.approx(1 - ball_transform_g(N, 4.0 + 1e-13), abs=1e-12)


def test_g_decays():
    for N in (1, 2, 3, 7):
        assert abs(ball_transform_g(N, 1e3)) < 1e-3


def test_g_radial_monte_carlo():
    # random rotations of a fixed frequency vector in R^2 and R^3
    rng = np.random.default_rng(42)
    for N in (2, 3):
        pts = rng.normal(size=(400_000, N))
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        pts *= rng.uniform(size=(len(pts), 1)) ** (1 / N)
        for _ in range(4):
            omega = rng.normal(size=N)
            omega *= 2.3 / np.linalg.norm(omega)
            vals = np.cos(pts @ omega)
            err = 4 * vals.std() / math.sqrt(len(vals))
            assert abs(vals.mean() - ball_transform_g(N, 2.3)) < err


def test_ball_volume():
    assert ball_volume(1, 1) == pytest.approx(2, rel=1e-15)
    assert ball_volume(2, 1) == pytest.approx(math.pi, rel=1e-15)
    assert ball_volume(3, 2) == pytest.approx(32 * math.pi / 3, rel=1e-15)
    assert ball_volume(5, 1.7) == pytest.approx(1.7**5 * ball_volume(5, 1), rel=1e-14)


# -- alpha_{m+1} ------------------------------------------------------------------------


def test_landau_envelope_covers_orders():
    x = np.linspace(1e-3, 300, 300_001)
    for nu in np.arange(0.5, 5.01, 0.5):
        assert np.all(np.abs(bessel_j(nu, x)) <= LANDAU_C * x ** (-1 / 3) + 1e-15)


def test_sqrt_envelope_fails_above_half_order():
    # sqrt(2/(pi x)) is not an envelope of J_1; the tail uses the x^(-1/3) bound instead
    x = np.linspace(0.1, 50, 50_000)
    assert np.max(np.sqrt(x) * np.abs(bessel_j(1.0, x))) > math.sqrt(2 / math.pi)


def test_alpha_small_T_n1():
    # 1 - sin(rho)/rho ~ rho^2/6 - rho^4/120
    a = alpha_m_plus_1(1, 0.1)
    assert 1 / 6 - 0.01 / 120 - 2e-4 < a < 1 / 6


def test_alpha_n2_taylor():
    a = alpha_m_plus_1(2, 1.0)
    assert a < 1 / 8
    assert a > 0.9 * (1 / 8 - 1 / 192)


@pytest.mark.parametrize("N", [1, 2, 3, 6])
@pytest.mark.parametrize("T", [0.05, 0.7, 2.0, 5.0])
def test_alpha_certificate(N, T):
    cert = certify_alpha_m_plus_1(N, T)
    rho = np.concatenate([np.linspace(0, 40, 400_001), [cert.tail_start]])
    with np.errstate(invalid="ignore"):
        gap = one_minus_g(N, rho) - cert.alpha * np.minimum(rho, T) ** 2
    assert np.all(gap >= 0)
    assert cert.alpha <= cert.grid_min


def test_alpha_rejects_bad_T():
    with pytest.raises(ValueError):
        certify_alpha_m_plus_1(1, 0.0)


def test_certification_error_is_raised_on_violation(monkeypatch):
    import ingham.ball as ball

    # a grid stopping at 0.5 only sees the quadratic regime; the tail check must object
    monkeypatch.setattr(ball, "_tail_start", lambda N: 0.5)
    with pytest.raises(CertificationError, match="violated"):
        ball.certify_alpha_m_plus_1(1, 1.5)
