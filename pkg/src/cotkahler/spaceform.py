"""Coordinate charts of constant-curvature Riemannian manifolds.

The base is modelled by the conformally flat chart

    g_ij(x) = delta_ij / sigma(x)**2,   sigma(x) = 1 + (c/4) |x|^2,

which has constant sectional curvature ``c`` for every sign of ``c`` and is
valid on ``{x : sigma(x) > 0}``.

Curvature convention (used everywhere in the package)
-----------------------------------------------------
``riemann[h, k, i, j] = R^h_{kij}`` with ``R(d_i, d_j) d_k = R^h_{kij} d_h`` and
``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]``.  Explicitly

    R^h_{kij} = d_i Gamma^h_{jk} - d_j Gamma^h_{ik}
                + Gamma^h_{il} Gamma^l_{jk} - Gamma^h_{jl} Gamma^l_{ik},

so that a space form has ``R^h_{kij} = c (delta^h_i g_jk - delta^h_j g_ik)`` and
``g(R(u, v) v, u) / |u ^ v|^2 = c``.  With this convention the horizontal
bracket on the cotangent bundle reads ``[d/dq^i, d/dq^j] = p_h R^h_{kij} d/dp_k``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._fd import directional_derivative
from .errors import DomainError, LowDimensionWarning

__all__ = [
    "SpaceFormChart",
    "MetricSample",
    "metric_at",
    "fd_christoffel_oracle",
    "fd_curvature_oracle",
    "sectional_curvature",
    "metric_compatibility_residual",
    "sampling_radius",
]

FD_DISAGREEMENT = 1e-6


@dataclass(frozen=True)
class SpaceFormChart:
    n: int
    c: float
    model: str = "projective-conformal"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n!r}")
        if self.model != "projective-conformal":
            raise ValueError(f"unknown chart model {self.model!r}")
        if self.n == 2:
            warnings.warn(
                "n = 2: integrability only forces constant curvature for n >= 3; "
                "the chart is still a space form by construction",
                LowDimensionWarning,
                stacklevel=2,
            )

    def conformal_factor(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return 1.0 + 0.25 * self.c * float(x @ x)

    def contains(self, x) -> bool:
        return self.conformal_factor(x) > 0.0

    def check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DomainError(f"expected {self.n} base coordinates, got shape {x.shape}")
        if not self.contains(x):
            raise DomainError(
                f"x = {x.tolist()} lies outside the chart: 1 + (c/4)|x|^2 = {self.conformal_factor(x)!r} <= 0"
            )
        return x

    def metric(self, x) -> np.ndarray:
        """Covariant metric only; used by the finite-difference oracles."""
        x = self.check_point(x)
        return np.eye(self.n) / self.conformal_factor(x) ** 2


@dataclass(frozen=True)
class MetricSample:
    x: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    gamma: np.ndarray  # gamma[k, i, j] = Gamma^k_{ij}
    riemann: np.ndarray  # riemann[h, k, i, j] = R^h_{kij}

    @property
    def n(self) -> int:
        return self.g.shape[0]


def _christoffel(chart: SpaceFormChart, x: np.ndarray) -> np.ndarray:
    # g = exp(2 f) delta with f = -log(sigma)
    sigma = chart.conformal_factor(x)
    df = -0.5 * chart.c * x / sigma
    eye = np.eye(chart.n)
    return (np.einsum("ki,j->kij", eye, df) + np.einsum("kj,i->kij", eye, df)
            - np.einsum("ij,k->kij", eye, df))


def _riemann_space_form(c: float, g: np.ndarray) -> np.ndarray:
    eye = np.eye(g.shape[0])
    return c * (np.einsum("hi,jk->hkij", eye, g) - np.einsum("hj,ik->hkij", eye, g))


def metric_at(chart: SpaceFormChart, x) -> MetricSample:
    """Evaluate metric, inverse, Christoffel symbols and curvature at ``x``."""
    x = chart.check_point(x)
    sigma = chart.conformal_factor(x)
    g = np.eye(chart.n) / sigma**2
    g_inv = np.eye(chart.n) * sigma**2
    return MetricSample(
        x=x,
        g=g,
        g_inv=g_inv,
        gamma=_christoffel(chart, x),
        riemann=_riemann_space_form(chart.c, g),
    )


def default_step(x) -> float:
    return 1e-5 * max(1.0, float(np.linalg.norm(x)))


def _check_stencil(chart, x, h):
    for i in range(chart.n):
        for s in (-1.0, 1.0):
            y = x.copy()
            y[i] += s * h
            if not chart.contains(y):
                raise DomainError(f"finite-difference stencil leaves the chart at x = {x.tolist()}, h = {h}")


def fd_christoffel_oracle(chart: SpaceFormChart, x, h: float | None = None) -> np.ndarray:
    """Christoffel symbols from central differences of the metric alone.

    Independent of the closed form in :func:`metric_at`.  Returns
    ``gamma[k, i, j]``.
    """
    x = chart.check_point(x)
    h = default_step(x) if h is None else float(h)
    _check_stencil(chart, x, h)
    eye = np.eye(chart.n)
    # dg[l, i, j] = d_l g_ij
    dg = np.stack([directional_derivative(chart.metric, x, eye[l], h,
                                          tol=FD_DISAGREEMENT, relative=False)
                   for l in range(chart.n)])
    g_inv = np.linalg.inv(chart.metric(x))
    first_kind = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    return np.einsum("kl,lij->kij", g_inv, first_kind)


def fd_curvature_oracle(chart: SpaceFormChart, x, h: float | None = None) -> np.ndarray:
    """``R^h_{kij}`` from central differences of the Christoffel symbols."""
    x = chart.check_point(x)
    h = default_step(x) if h is None else float(h)
    _check_stencil(chart, x, h)
    eye = np.eye(chart.n)
    # dgam[m, h, a, b] = d_m Gamma^h_{ab}
    dgam = np.stack([directional_derivative(lambda y: _christoffel(chart, y), x, eye[m], h,
                                            tol=FD_DISAGREEMENT, relative=False)
                     for m in range(chart.n)])
    gam = _christoffel(chart, x)
    return (np.einsum("ihjk->hkij", dgam) - np.einsum("jhik->hkij", dgam)
            + np.einsum("hil,ljk->hkij", gam, gam) - np.einsum("hjl,lik->hkij", gam, gam))


def sectional_curvature(chart: SpaceFormChart, x, u, v) -> float:
    """Sectional curvature of the plane spanned by tangent vectors ``u``, ``v``."""
    ms = metric_at(chart, x)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    g = ms.g
    denom = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
    if denom < 1e-14:
        raise DomainError(f"degenerate plane: |u ^ v|^2 = {denom!r}")
    r_uvv = np.einsum("hkij,k,i,j->h", ms.riemann, v, u, v)
    return float(r_uvv @ g @ u / denom)


def metric_compatibility_residual(chart: SpaceFormChart, x, h: float | None = None) -> float:
    """max |d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il| with d_k by central differences."""
    ms = metric_at(chart, x)
    h = default_step(ms.x) if h is None else float(h)
    _check_stencil(chart, ms.x, h)
    eye = np.eye(chart.n)
    dg = np.stack([directional_derivative(chart.metric, ms.x, eye[k], h,
                                          tol=FD_DISAGREEMENT, relative=False)
                   for k in range(chart.n)])
    res = (dg - np.einsum("lki,lj->kij", ms.gamma, ms.g)
           - np.einsum("lkj,il->kij", ms.gamma, ms.g))
    return float(np.max(np.abs(res)))


def sampling_radius(c: float) -> float:
    """Radius of the ball in which base points are sampled.

    For ``c < 0`` the chart boundary sits at ``|x| = 2/sqrt(-c)``; sampling stays
    within half of it so the conformal factor is bounded below by 3/4.
    """
    if c > 0:
        return 1.0
    if c == 0:
        return 2.0
    return min(2.0, 1.0 / np.sqrt(-c))
