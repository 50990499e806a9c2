"""Exact Gram matrices of exponential systems over balls, and what is built on them.

The Gram entry for frequencies w_k, w_n over the centered ball B_R is

    int_{B_R} exp(i (w_k - w_n) . t) dt = V_R * g(R |w_k - w_n|),

which is real because the ball is symmetric. Extreme eigenvalues of this
matrix are the sharp two-sided constants for the finite family; they serve as
the independent check on the constants produced by :mod:`ingham.constants`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .ball import ball_transform_g, ball_volume, dirichlet_mu, one_minus_g
from .quadrature import adaptive_gl, gauss_legendre
from .spectra import FrequencyFamily, PartitionedFamily, geometry


class ConvergenceError(ArithmeticError):
    pass


class ConditioningError(ArithmeticError):
    pass


class HypothesisError(ValueError):
    """Radius outside the range (R0, 2 R0] in which the constants are certified."""


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    radius: float
    family: FrequencyFamily

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def volume(self) -> float:
        return ball_volume(self.family.dimension, self.radius)


@dataclass(frozen=True)
class RieszBounds:
    lambda_min: float
    lambda_max: float
    residual: float
    sweeps: int = 0


@dataclass(frozen=True)
class DualFamily:
    coefficients: np.ndarray
    biorthogonality_residual: float
    dual_norms: np.ndarray
    primal_norm: float
    bounds: RieszBounds

    def check_norm_bounds(self, rtol: float = 1e-9) -> bool:
        lo, hi = self.bounds.lambda_min, self.bounds.lambda_max
        return bool(
            np.all(self.dual_norms <= (1 + rtol) / math.sqrt(lo)) and self.primal_norm <= (1 + rtol) * math.sqrt(hi)
        )


def gram_matrix(family: FrequencyFamily, R: float) -> GramMatrix:
    if not R > 0:
        raise ValueError("radius must be positive")
    N = family.dimension
    diff = family.points[:, None, :] - family.points[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    G = ball_volume(N, R) * ball_transform_g(N, R * dist)
    G = 0.5 * (G + G.T)
    G.setflags(write=False)
    return GramMatrix(entries=G, radius=float(R), family=family)


def gram_entry_quadrature(delta, R: float, tol: float = 1e-11) -> float:
    """int_{B_R} cos(delta . t) dt by direct quadrature in polar coordinates (N <= 3)."""
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    N, d = len(delta), float(np.linalg.norm(delta))
    if N == 1:
        return float(adaptive_gl(lambda t: np.cos(d * t), -R, R, tol=tol))
    if N == 2:
        theta = np.linspace(0.0, 2 * np.pi, 257)[:-1]
        ct = np.cos(theta)
        # periodic integrand in theta: the trapezoid rule is spectrally accurate
        inner = lambda rho: rho * np.cos(d * np.outer(rho, ct)).mean(axis=1) * 2 * np.pi
        return float(adaptive_gl(inner, 0.0, R, tol=tol))
    if N == 3:
        x, w = gauss_legendre(64)
        inner = lambda rho: 2 * np.pi * rho**2 * (np.cos(d * np.outer(rho, x)) @ w)
        return float(adaptive_gl(inner, 0.0, R, tol=tol))
    raise ValueError("quadrature cross-check implemented for N <= 3")


def jacobi_eigh(A: np.ndarray, rel_tol: float = 1e-13, max_sweeps: int = 100):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues ascending
    and eigenvectors as columns. Sweeps stop once the off-diagonal Frobenius
    norm falls below ``rel_tol * ||A||_F``.
    """
    a = np.array(A, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, rtol=0, atol=1e-14 * max(1.0, np.abs(a).max())):
        raise ValueError("jacobi_eigh needs a square symmetric matrix")
    v = np.eye(n)
    scale = np.linalg.norm(a)
    target = rel_tol * scale

    mask = ~np.eye(n, dtype=bool)

    def off(m):
        return math.sqrt(np.sum(m[mask] ** 2))

    sweeps = 0
    while off(a) > target:
        if sweeps == max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps; matrix:\n{np.array2string(np.asarray(A))}")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * abs(apq)
                if abs(a[p, p]) + g == abs(a[p, p]) and abs(a[q, q]) + g == abs(a[q, q]):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order], sweeps


def riesz_bounds(gram: GramMatrix | np.ndarray) -> RieszBounds:
    G = gram.entries if isinstance(gram, GramMatrix) else np.asarray(gram, dtype=float)
    w, v, sweeps = jacobi_eigh(G)
    res = 0.0
    for i in (0, -1):
        res = max(res, float(np.max(np.abs(G @ v[:, i] - w[i] * v[:, i]))))
    return RieszBounds(lambda_min=float(w[0]), lambda_max=float(w[-1]), residual=res, sweeps=sweeps)


def quadratic_form(family: FrequencyFamily, R: float, x) -> float:
    """int_{B_R} |sum_k x_k exp(i w_k . t)|^2 dt for complex coefficients x."""
    x = np.asarray(x)
    if x.shape != (len(family),):
        raise ValueError(f"coefficient vector has shape {x.shape}, expected ({len(family)},)")
    G = gram_matrix(family, R).entries
    xr, xi = np.real(x).astype(float), np.imag(x).astype(float)
    return float(xr @ G @ xr + xi @ G @ xi)


def dual_family(gram: GramMatrix) -> DualFamily:
    bounds = riesz_bounds(gram)
    V = gram.volume
    if not bounds.lambda_min > 1e-12 * V:
        raise ConditioningError(
            f"Gram over radius {gram.radius} is numerically singular: lambda_min = {bounds.lambda_min:.3e}"
        )
    G = gram.entries
    D = linalg.cho_solve(linalg.cho_factor(G), np.eye(gram.size))
    D = 0.5 * (D + D.T)
    resid = float(np.max(np.abs(D @ G - np.eye(gram.size))))
    return DualFamily(
        coefficients=D,
        biorthogonality_residual=resid,
        dual_norms=np.sqrt(np.diag(D)),
        primal_norm=math.sqrt(V),
        bounds=bounds,
    )


def haraux_map(family: FrequencyFamily, class_labels, k_prime, r: float, x) -> np.ndarray:
    """Coefficients of y = x - (ball average of the k'-demodulated shifts of x).

    The sum runs over ``class_labels`` followed by ``k_prime`` (appended unless
    already present); ``x`` is indexed the same way. Each coefficient is
    multiplied by ``1 - g(r |w_k - w_k'|)``, which kills the k' term.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    labels = list(class_labels)
    if k_prime not in labels:
        labels.append(k_prime)
    pts = family.points[[family.index(lab) for lab in labels]]
    x = np.asarray(x)
    if x.shape != (len(labels),):
        raise ValueError(f"coefficient vector has shape {x.shape}, expected ({len(labels)},)")
    w_prime = family.points[family.index(k_prime)]
    dist = np.linalg.norm(pts - w_prime, axis=1)
    return one_minus_g(family.dimension, r * dist) * x


class KahaneAssembly:
    """Per-class dual functions psi_{k,j} and their product rho_hat_k.

    For k in class j the dual is taken in the class system over B_{R_j + r};
    otherwise in the class enlarged by k over B_{R_j + 2r}. Each psi_{k,j} is
    sum_n d_n exp(i w_n . t) restricted to its ball, so its Fourier transform
    at w is sum_n d_n V_B g(B |w_n - w|).
    """

    def __init__(self, pf: PartitionedFamily, R: float):
        self.pf = pf
        self.geometry = geometry(pf, dirichlet_mu(pf.family.dimension))
        R0, m = self.geometry.critical_radius, pf.m
        if not (R0 < R <= 2 * R0 * (1 + 1e-12)):
            raise HypothesisError(f"R = {R} outside ({R0}, {2 * R0}]")
        self.R = float(R)
        self.r = (R - R0) / (2 * m)
        self._systems: dict = {}

    def _system(self, k, j):
        key = (k, j)
        if key not in self._systems:
            members = self.pf.members(j)
            Rj = self.geometry.class_radii[j - 1]
            if k in members:
                labels, radius = members, Rj + self.r
            else:
                labels, radius = members + [k], Rj + 2 * self.r
            sub = self.pf.family.subfamily(labels)
            try:
                dual = dual_family(gram_matrix(sub, radius))
            except ConditioningError as exc:
                raise ConditioningError(f"class {j}, radius {radius}: {exc}") from None
            i = labels.index(k)
            self._systems[key] = (sub, radius, dual.coefficients[:, i], dual)
        return self._systems[key]

    def psi_hat(self, k, j, omega) -> np.ndarray:
        sub, radius, d, _ = self._system(k, j)
        om = np.atleast_2d(np.asarray(omega, dtype=float))
        N = sub.dimension
        dist = np.linalg.norm(sub.points[None, :, :] - om[:, None, :], axis=2)
        return ball_volume(N, radius) * ball_transform_g(N, radius * dist) @ d

    def rho_hat(self, k, omega) -> np.ndarray:
        out = np.ones(np.atleast_2d(np.asarray(omega, dtype=float)).shape[0])
        for j in range(1, self.pf.m + 1):
            out = out * self.psi_hat(k, j, omega)
        return out

    def interpolation_residual(self) -> float:
        """max_{k,n} |rho_hat_k(w_n) - delta_kn|."""
        pts = self.pf.family.points
        worst = 0.0
        for i, k in enumerate(self.pf.family.labels):
            vals = self.rho_hat(k, pts)
            target = np.zeros(len(pts))
            target[i] = 1.0
            worst = max(worst, float(np.max(np.abs(vals - target))))
        return worst

    def l1_bound(self, k) -> float:
        """prod_j sqrt(V_B ||psi_{k,j}||_2^2): L^1 bound of rho_k from the actual duals."""
        prod = 1.0
        for j in range(1, self.pf.m + 1):
            sub, radius, d, dual = self._system(k, j)
            i = list(sub.labels).index(k)
            prod *= math.sqrt(ball_volume(sub.dimension, radius) * dual.coefficients[i, i])
        return prod


def rho_hat(pf: PartitionedFamily, R: float, k, omega) -> np.ndarray:
    return KahaneAssembly(pf, R).rho_hat(k, omega)
