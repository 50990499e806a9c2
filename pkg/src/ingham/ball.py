"""Special functions of the unit ball in R^N.

Bessel functions of order nu >= -1/2, the first Dirichlet eigenpair of the
unit ball, the Fourier transform ``h`` of the eigenfunction, and the
normalized ball transform ``g``.

The eigenfunction is normalized to unit L^2 norm on the unit ball. With
``nu = N/2 - 1`` and ``j`` the first positive zero of ``J_nu``::

    H(rho) = c * rho**(-nu) * J_nu(j * rho),   mu = j**2
    g(rho) = Gamma(N/2 + 1) * (2 / rho)**(N/2) * J_{N/2}(rho)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from .quadrature import adaptive_gl

MAX_DIMENSION = 10
# Landau (2000): |J_nu(x)| <= b * x**(-1/3) for all nu >= 0, x > 0.
LANDAU_C = 0.7857468704
SERIES_CUTOFF = 4.0
_SERIES_TERMS = 40


class UnsupportedOrderError(ValueError):
    pass


class ConsistencyError(ArithmeticError):
    """A computed quantity contradicts a known analytic property."""


class CertificationError(ArithmeticError):
    """A returned constant failed its verification grid."""


def _check_order(order: float) -> None:
    if order < -0.5:
        raise UnsupportedOrderError(f"Bessel order {order} is below -1/2")


def bessel_j(order: float, x):
    """J_order(x) for order >= -1/2 and x >= 0."""
    _check_order(order)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("bessel_j is defined here for x >= 0 only")
    out = special.jv(order, x)
    return float(out) if out.ndim == 0 else out


def bessel_j_scaled(order: float, x):
    """J_order(x) / x**order, finite at x = 0 (value 1 / (2**order * Gamma(order + 1)))."""
    _check_order(order)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= SERIES_CUTOFF
    if np.any(small):
        z2 = (0.5 * x[small]) ** 2
        term = np.full_like(z2, 1.0 / special.gamma(order + 1.0))
        acc = term.copy()
        for k in range(1, _SERIES_TERMS):
            term = -term * z2 / (k * (order + k))
            acc += term
        out[small] = acc / 2.0**order
    big = ~small
    if np.any(big):
        out[big] = special.jv(order, x[big]) / x[big] ** order
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def first_bessel_zero(order: float) -> float:
    """First positive zero of J_order, -1/2 <= order <= 50."""
    _check_order(order)
    if order > 50:
        raise UnsupportedOrderError(f"order {order} above supported range 50")
    # elementary cases: J_{-1/2} ~ cos x / sqrt x, J_{1/2} ~ sin x / sqrt x
    if order == -0.5:
        return math.pi / 2
    if order == 0.5:
        return math.pi
    # no zeros of J_nu in (0, nu]
    lo = max(order, 1e-3)
    step = 0.1
    f_lo = special.jv(order, lo)
    while True:
        hi = lo + step
        f_hi = special.jv(order, hi)
        if f_lo * f_hi <= 0:
            break
        lo, f_lo = hi, f_hi
    root = optimize.brentq(lambda x: special.jv(order, x), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    # one Newton polish step
    d = 0.5 * (special.jv(order - 1, root) - special.jv(order + 1, root))
    return float(root - special.jv(order, root) / d)


def dirichlet_mu(N: int) -> float:
    """First eigenvalue of -Laplacian on H_0^1 of the unit ball in R^N."""
    _check_dimension(N)
    return first_bessel_zero(N / 2 - 1) ** 2


def _check_dimension(N: int) -> None:
    if not (1 <= N <= MAX_DIMENSION):
        raise ValueError(f"dimension {N} outside supported range 1..{MAX_DIMENSION}")


def sphere_area(N: int) -> float:
    """Surface measure of the unit sphere S^{N-1} (2 for N = 1)."""
    return 2.0 * math.pi ** (N / 2) / math.gamma(N / 2)


def ball_volume(N: int, R: float = 1.0) -> float:
    if R < 0:
        raise ValueError("radius must be nonnegative")
    return math.pi ** (N / 2) * R**N / math.gamma(N / 2 + 1)


def sphere_average_cos(N: int, z):
    """Mean of cos(z * e . u) over unit vectors u; equals 1 at z = 0."""
    nu = N / 2 - 1
    return math.gamma(N / 2) * 2.0**nu * bessel_j_scaled(nu, z)


@dataclass(frozen=True)
class RadialWindow:
    """First Dirichlet eigenfunction of the unit ball, unit L^2 norm, positive inside."""

    dimension: int
    mu: float
    norm_const: float
    h_at_zero: float
    l2_norm: float = 1.0

    @property
    def order(self) -> float:
        return self.dimension / 2 - 1

    def profile(self, rho):
        """H as a function of the radius; zero outside the unit ball."""
        rho = np.asarray(rho, dtype=float)
        j = math.sqrt(self.mu)
        nu = self.order
        out = self.norm_const * j**nu * bessel_j_scaled(nu, j * np.minimum(rho, 1.0))
        out = np.where(rho >= 1.0, 0.0, out)
        return float(out) if out.ndim == 0 else out

    def radial_integral(self, f, tol: float = 1e-12) -> float:
        """Integral over B_1 of a radial function given by its profile f(rho)."""
        N = self.dimension
        val = adaptive_gl(lambda r: f(r) * r ** (N - 1), 0.0, 1.0, tol=tol)
        return float(sphere_area(N) * val)


@lru_cache(maxsize=None)
def eigen_profile(N: int) -> RadialWindow:
    _check_dimension(N)
    nu = N / 2 - 1
    j = first_bessel_zero(nu)
    # int_0^1 rho J_nu(j rho)^2 d rho = J_{nu+1}(j)^2 / 2
    c = math.sqrt(2.0 / (sphere_area(N) * special.jv(nu + 1, j) ** 2))
    w = RadialWindow(dimension=N, mu=j * j, norm_const=c, h_at_zero=1.0)
    h0 = w.radial_integral(w.profile)
    return RadialWindow(dimension=N, mu=j * j, norm_const=c, h_at_zero=h0)


def fourier_h(window: RadialWindow, t, tol: float = 1e-11):
    """h(t) = integral over B_1 of H(x) cos(x . t), as a function of |t|."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    N = window.dimension
    flat = t.ravel()

    def integrand(rho):
        H = window.profile(rho)
        return (H * rho ** (N - 1))[:, None] * sphere_average_cos(N, np.outer(rho, flat))

    vals = sphere_area(N) * adaptive_gl(integrand, 0.0, 1.0, tol=tol)
    out = vals.reshape(t.shape)
    return float(out[0]) if scalar else out


def min_h_squared(window: RadialWindow, step: float = 1e-3) -> float:
    """min over 0 <= t <= pi/2 of h(t)^2: dense grid then bounded refinement."""
    top = math.pi / 2
    n = int(math.ceil(top / step)) + 1
    grid = np.linspace(0.0, top, n)
    vals = np.asarray(fourier_h(window, grid)) ** 2
    i = int(np.argmin(vals))
    best = float(vals[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda s: fourier_h(window, s) ** 2, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        best = min(best, float(res.fun))
    if not best > 0:
        raise ConsistencyError(f"min of h^2 on [0, pi/2] is {best} for N={window.dimension}")
    return best


def ball_transform_g(N: int, rho):
    """g(rho) = (1/V_1) * integral over B_1 of cos(omega . s), rho = |omega|."""
    return math.gamma(N / 2 + 1) * 2.0 ** (N / 2) * bessel_j_scaled(N / 2, rho)


def one_minus_g(N: int, rho):
    """1 - g(rho) without cancellation near rho = 0."""
    rho = np.asarray(rho, dtype=float)
    out = np.empty_like(rho)
    small = rho <= SERIES_CUTOFF
    if np.any(small):
        a = N / 2
        z2 = (0.5 * rho[small]) ** 2
        # k-th term: (-1)^(k+1) Gamma(a+1) z2^k / (k! Gamma(a+k+1)), k >= 1
        term = z2 / (a + 1.0)
        acc = term.copy()
        for k in range(2, _SERIES_TERMS):
            term = -term * z2 / (k * (a + k))
            acc += term
        out[small] = acc
    big = ~small
    if np.any(big):
        out[big] = 1.0 - ball_transform_g(N, rho[big])
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TaylorCertificate:
    alpha: float
    tail_start: float
    grid_points: int
    grid_min: float


def _tail_start(N: int) -> float:
    # |g(rho)| <= Gamma(N/2+1) 2^{N/2} LANDAU_C rho^{-N/2-1/3} <= 1/2 beyond this point
    A = math.gamma(N / 2 + 1) * 2.0 ** (N / 2)
    return (2.0 * A * LANDAU_C) ** (1.0 / (N / 2 + 1.0 / 3.0))


def _ratio(N: int, rho: np.ndarray, T: float) -> np.ndarray:
    q = np.empty_like(rho)
    zero = rho == 0
    q[zero] = 1.0 / (2 * N + 4)
    nz = ~zero
    q[nz] = one_minus_g(N, rho[nz]) / np.minimum(rho[nz], T) ** 2
    return q


def certify_alpha_m_plus_1(N: int, T: float, n0: int = 2000, rtol: float = 1e-6, safety: float = 1e-3) -> TaylorCertificate:
    """Certified constant a with 1 - g(rho) >= a * min(rho, T)^2 for all rho > 0."""
    if not T > 0:
        raise ValueError("T must be positive")
    # The near-origin quadratic regime and the far regime are not split at an
    # explicit radius: the grid covers [0, rho*], the Bessel envelope the rest.
    rho_star = _tail_start(N)
    n = n0
    prev = float(np.min(_ratio(N, np.linspace(0.0, rho_star, n), T)))
    while True:
        n *= 2
        cur = float(np.min(_ratio(N, np.linspace(0.0, rho_star, n), T)))
        if abs(cur - prev) <= rtol * cur or n > 2**21:
            break
        prev = cur
    alpha = min(cur * (1.0 - safety), 0.5 / T**2)
    if not alpha > 0:
        raise CertificationError(f"nonpositive alpha_m+1 = {alpha} for N={N}, T={T}")
    fine = np.linspace(0.0, rho_star, 10 * n)
    tail = np.linspace(rho_star, rho_star + 200.0, 200_001)
    for rho in (fine, tail):
        gap = one_minus_g(N, rho) - alpha * np.minimum(rho, T) ** 2
        if np.any(gap < 0):
            bad = rho[np.argmin(gap)]
            raise CertificationError(f"alpha_m+1 = {alpha} violated at rho = {bad} (N={N}, T={T})")
    return TaylorCertificate(alpha=alpha, tail_start=rho_star, grid_points=n, grid_min=cur)


@lru_cache(maxsize=256)
def alpha_m_plus_1(N: int, T: float) -> float:
    return certify_alpha_m_plus_1(N, T).alpha
