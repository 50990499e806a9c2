"""The constant chain of the two-sided estimate for exponential sums over balls.

For a partitioned family with critical radius R0 and R0 < R <= 2 R0 the
chain below produces c1, c2 with

    c1 (R - R0)^(5m - 4 + 2N) sum |x_k|^2 <= int_{B_R} |sum x_k e^{i w_k t}|^2 dt <= c2 sum |x_k|^2.

All windows use the first Dirichlet eigenfunction H of the unit ball with
||H||_2 = 1, so for H_s(x) = H(x/s): ||H_s||^2 = s^N and h_s(t) = s^N h(st).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize

from .ball import (
    CertificationError,
    RadialWindow,
    alpha_m_plus_1,
    ball_volume,
    dirichlet_mu,
    eigen_profile,
    fourier_h,
    min_h_squared,
)
from .gram import HypothesisError
from .spectra import GapGeometry, PartitionedFamily, geometry


class SingletonClassError(ValueError):
    pass


def exponent(m: int, N: int) -> int:
    if m < 1 or N < 1:
        raise ValueError("m and N must be positive")
    return 5 * m - 4 + 2 * N


@lru_cache(maxsize=None)
def _min_h2(N: int) -> float:
    return min_h_squared(eigen_profile(N))


def alpha_zero(N: int, gamma: float, R_ball: float, window: RadialWindow | None = None) -> tuple[float, float]:
    """Upper constant for balls of radius up to ``R_ball``: returns (alpha0', alpha0)."""
    if not (gamma > 0 and math.isfinite(gamma)):
        raise ValueError(f"gap must be positive and finite, got {gamma}")
    if not R_ball > 0:
        raise ValueError("ball radius must be positive")
    window = window or eigen_profile(N)
    s = gamma / 2
    G0 = s**N
    min_g = s ** (2 * N) * (_min_h2(N) if window == eigen_profile(N) else min_h_squared(window))
    a0p = (2 * math.pi) ** N * G0 / min_g
    # B_R is covered by at most (1 + R gamma / pi)^N translates of B_{pi/gamma}
    return a0p, (1 + R_ball * gamma / math.pi) ** N * a0p


@lru_cache(maxsize=1024)
def _sup_window(N: int, s: float, radius: float) -> float:
    """sup over |t| <= radius of (radius^2 - |t|^2) h(s t)^2."""
    w = eigen_profile(N)

    def f(t):
        t = np.asarray(t, dtype=float)
        return (radius**2 - t**2) * np.asarray(fourier_h(w, s * t)) ** 2

    grid = np.linspace(0.0, radius, 1001)
    vals = f(grid)
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(lambda t: -float(f(t)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    best = max(best, -float(res.fun))
    fine = f(np.linspace(0.0, radius, 10_001))
    if fine.max() > best * (1 + 1e-12):
        raise CertificationError(f"window sup {best} exceeded on verification grid: {fine.max()}")
    return best


def singleton_alpha_j(N: int, r: float) -> float:
    """Class with one point: int_{B_r} |x e^{iwt}|^2 = V_r |x|^2, written as alpha * r."""
    return ball_volume(N, r) / r


def alpha_j(geom: GapGeometry, j: int, r: float, window: RadialWindow | None = None, r_sup: float | None = None) -> float:
    """Lower constant of class j: alpha_j r sum_{K_j} |x|^2 <= int_{B_{R_j + r}} |x_j|^2.

    ``r_sup`` switches to the r-free variant: the window sup is taken at
    radius R_j + r_sup and the factor (2 R_j + r) is replaced by 2 R_j.
    """
    gj = geom.class_gammas[j - 1]
    if math.isinf(gj):
        raise SingletonClassError(f"class {j} is a singleton; use singleton path")
    if not r > 0:
        raise ValueError("r must be positive")
    N = geom.dimension
    Rj = geom.class_radii[j - 1]
    s = gj / 2
    if r_sup is None:
        G0 = (2 * Rj + r) * r * s**N
        sup_g = s ** (2 * N) * _sup_window(N, s, Rj + r)
    else:
        G0 = 2 * Rj * r * s**N
        sup_g = s ** (2 * N) * _sup_window(N, s, Rj + r_sup)
    return (2 * math.pi) ** N * G0 / (r * sup_g)


def alpha_j_prime(
    geom: GapGeometry, j: int, r: float, alpha_j_val: float, alpha_m1: float, alpha0: float, volume: float | None = None
) -> float:
    """Lower constant for class j enlarged by one point, ball radius R_j + 2r, scale r^5."""
    N = geom.dimension
    V = ball_volume(N, geom.class_radii[j - 1] + 2 * r) if volume is None else volume
    A = alpha_j_val * alpha_m1**2 * geom.gamma**4
    D = 4 + (2 * A * r**5 + 8 * alpha0) / V
    return A / D


@dataclass(frozen=True)
class ConstantChain:
    R: float
    R0: float
    r: float
    m: int
    dimension: int
    exponent: int
    gamma: float
    class_gammas: tuple
    alpha0_prime: float
    alpha0: float
    alpha0_small: float
    alpha_j: tuple
    alpha_m1: float
    alpha_j_prime: tuple
    p_factors: dict
    L: float
    c1: float
    c2: float
    paper_uniform: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["class_gammas"] = [None if math.isinf(g) else g for g in self.class_gammas]
        d["p_factors"] = {str(k): v for k, v in self.p_factors.items()}
        d["alpha_j"] = list(self.alpha_j)
        d["alpha_j_prime"] = list(self.alpha_j_prime)
        return d


def theorem_constants(pf: PartitionedFamily, R: float, paper_uniform: bool = False) -> ConstantChain:
    N, m = pf.family.dimension, pf.m
    geom = geometry(pf, dirichlet_mu(N))
    R0, gamma = geom.critical_radius, geom.gamma
    if not R > R0:
        raise HypothesisError(f"R = {R} must exceed R0 = {R0}")
    if R > 2 * R0 * (1 + 1e-12):
        raise HypothesisError(f"R = {R} exceeds 2 R0 = {2 * R0}")
    r = (R - R0) / (2 * m)
    r_max = R0 / (2 * m)
    # rho_k * G_k must live in B_R: sum R_j + (2m - 1) r + r <= R
    assert R0 + 2 * m * r <= R * (1 + 1e-12)
    window = eigen_profile(N)

    a0p, a0 = alpha_zero(N, gamma, 2 * R0, window)
    a0_small = a0 if paper_uniform else alpha_zero(N, gamma, r, window)[1]

    T = R0 * gamma / (2 * m)
    am1 = alpha_m_plus_1(N, T)

    a_j, a_jp, vol_in, vol_out = [], [], [], []
    for j in range(1, m + 1):
        Rj = geom.class_radii[j - 1]
        singleton = math.isinf(geom.class_gammas[j - 1])
        # r-free variant: worst case over 0 < r <= R0/(2m); singletons have no r-free form
        uniform = paper_uniform and not singleton
        if singleton:
            aj = singleton_alpha_j(N, r)
        else:
            aj = alpha_j(geom, j, r, window, r_sup=r_max if uniform else None)
        v_in = ball_volume(N, Rj + (r_max if uniform else r))
        v_out = ball_volume(N, Rj + 2 * r)
        if uniform:
            # smallest admissible volume and largest r^5 term in the denominator
            A = aj * am1**2 * gamma**4
            ajp = A / (4 + (2 * A * r_max**5 + 8 * a0) / ball_volume(N, Rj))
            v_out = ball_volume(N, Rj + 2 * r_max)
        else:
            ajp = alpha_j_prime(geom, j, r, aj, am1, a0, v_out)
        a_j.append(aj)
        a_jp.append(ajp)
        vol_in.append(v_in)
        vol_out.append(v_out)

    # Hoelder: ||psi_{k,j}||_1^2 <= V_B / lambda_min, lambda_min from the class lower bounds
    p_factors = {}
    for lab, jk in zip(pf.family.labels, pf.classes):
        p2 = vol_in[jk - 1] / (a_j[jk - 1] * r)
        for j in range(1, m + 1):
            if j != jk:
                p2 *= vol_out[j - 1] / (a_jp[j - 1] * r**5)
        p_factors[lab] = math.sqrt(p2)
    p_max = max(p_factors.values())

    h0 = window.h_at_zero
    g0 = h0**2 * (r / 2) ** (2 * N)
    G0 = (r / 2) ** N
    L = g0**2 / (p_max**2 * G0**2 * a0_small)
    e = exponent(m, N)
    return ConstantChain(
        R=float(R),
        R0=R0,
        r=r,
        m=m,
        dimension=N,
        exponent=e,
        gamma=gamma,
        class_gammas=tuple(geom.class_gammas),
        alpha0_prime=a0p,
        alpha0=a0,
        alpha0_small=a0_small,
        alpha_j=tuple(a_j),
        alpha_m1=am1,
        alpha_j_prime=tuple(a_jp),
        p_factors=p_factors,
        L=L,
        c1=L / (R - R0) ** e,
        c2=a0,
        paper_uniform=paper_uniform,
    )
