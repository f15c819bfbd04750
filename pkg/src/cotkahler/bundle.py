"""Points of T*M, the adapted frame and the blocks of J, G, H and phi.

Frame layout used throughout: indices ``0..n-1`` are the horizontal fields
``d/dq^i + Gamma^0_ih d/dp_h``, indices ``n..2n-1`` the vertical fields
``d/dp_i``.  Coordinates on T*M are ``z = (q^1..q^n, p_1..p_n)``.

Blocks keep their natural index position; nothing is raised or lowered
implicitly:

* ``J1[i, j] = J^(1)_ij``  (lower),  ``J2[i, j] = J_(2)^ij`` (upper)
* ``G1`` lower, ``G2`` upper, ``H1`` upper, ``H2`` lower
* ``phi[i, j] = lambda delta^i_j + mu g^{0i} p_j``
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .errors import DomainError, InadmissiblePointError
from .params import CoefficientSet, LambdaFamily, coefficient_rates, coefficients
from .spaceform import MetricSample, SpaceFormChart, metric_at

__all__ = [
    "CotangentPoint",
    "AdaptedFrame",
    "StructureTensors",
    "Lemma1Decomposition",
    "NaturalStructure",
    "BundlePoint",
    "energy_density",
    "adapted_frame",
    "structure_tensors",
    "full_matrices",
    "decompose_lemma1",
]


@dataclass(frozen=True)
class CotangentPoint:
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if self.x.shape != self.p.shape or self.x.ndim != 1:
            raise DomainError(f"x and p must be vectors of equal length, got {self.x.shape}, {self.p.shape}")

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])

    @classmethod
    def from_z(cls, z) -> "CotangentPoint":
        z = np.asarray(z, dtype=float)
        n = z.size // 2
        return cls(z[:n], z[n:])


@dataclass(frozen=True)
class AdaptedFrame:
    gamma0: np.ndarray  # gamma0[i, h] = p_k Gamma^k_ih
    g0: np.ndarray  # g0[i] = p_h g^hi
    basis_change: np.ndarray  # columns: frame fields in coordinate components

    @property
    def inverse(self) -> np.ndarray:
        n = self.gamma0.shape[0]
        inv = np.eye(2 * n)
        inv[n:, :n] = -self.gamma0.T
        return inv


@dataclass(frozen=True)
class StructureTensors:
    t: float
    J1: np.ndarray
    J2: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    H1: np.ndarray
    H2: np.ndarray
    phi: np.ndarray

    @property
    def n(self) -> int:
        return self.J1.shape[0]


def energy_density(ms: MetricSample, p) -> float:
    """t = 1/2 g^{ik} p_i p_k."""
    p = np.asarray(p, dtype=float)
    return 0.5 * float(p @ ms.g_inv @ p)


def adapted_frame(ms: MetricSample, pt: CotangentPoint) -> AdaptedFrame:
    n = ms.n
    gamma0 = np.einsum("k,kih->ih", pt.p, ms.gamma)
    basis = np.eye(2 * n)
    basis[n:, :n] = gamma0.T  # d/dq^i picks up Gamma^0_ih along d/dp_h
    return AdaptedFrame(gamma0=gamma0, g0=ms.g_inv @ pt.p, basis_change=basis)


def _check_positive(name, m):
    m = 0.5 * (m + m.T)
    w = np.linalg.eigvalsh(m)
    if not (np.all(np.isfinite(w)) and w[0] > 1e-12 * abs(w[-1]) and w[-1] > 0):
        raise InadmissiblePointError(f"{name} is not positive definite (eigenvalues {w.tolist()})")


def structure_tensors(coeffs: CoefficientSet, ms: MetricSample, pt: CotangentPoint,
                      *, check_positive: bool = True) -> StructureTensors:
    """Assemble the n x n blocks of J, G, H, phi at a bundle point."""
    t = energy_density(ms, pt.p)
    if abs(coeffs.t - t) > 1e-12 * max(1.0, t):
        raise ValueError(f"coefficients were computed at t = {coeffs.t!r}, point has t = {t!r}")
    p = pt.p
    g0 = ms.g_inv @ p
    pp = np.outer(p, p)
    g0g0 = np.outer(g0, g0)
    k = coeffs
    G1 = k.c1 * ms.g + k.d1 * pp
    G2 = k.c2 * ms.g_inv + k.d2 * g0g0
    if check_positive:
        _check_positive("G1", G1)
        _check_positive("G2", G2)
    return StructureTensors(
        t=t,
        J1=k.a1 * ms.g + k.b1 * pp,
        J2=k.a2 * ms.g_inv + k.b2 * g0g0,
        G1=G1,
        G2=G2,
        H1=ms.g_inv / k.c1 - k.d1 / (k.c1 * (k.c1 + 2 * t * k.d1)) * g0g0,
        H2=ms.g / k.c2 - k.d2 / (k.c2 * (k.c2 + 2 * t * k.d2)) * pp,
        phi=k.lambda_ * np.eye(ms.n) + k.mu * np.outer(g0, p),
    )


def full_matrices(st: StructureTensors) -> tuple[np.ndarray, np.ndarray]:
    """2n x 2n adapted-frame matrices of J and G.

    ``J[:, a]`` holds the frame components of ``J E_a``, so
    ``J = [[0, -J2], [J1, 0]]`` and ``G = diag(G1, G2)``.
    """
    n = st.n
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = -st.J2
    J[n:, :n] = st.J1
    G = np.zeros((2 * n, 2 * n))
    G[:n, :n] = st.G1
    G[n:, n:] = st.G2
    return J, G


@dataclass(frozen=True)
class Lemma1Decomposition:
    u: float
    v: float
    residual: float
    ok: bool


def decompose_lemma1(M, ms: MetricSample, p, tol: float = 1e-10) -> Lemma1Decomposition:
    """Write ``M = u g + v p (x) p`` by transvecting with g^{ij} and g^{0i} g^{0j}.

    ``ok`` is false when the remainder exceeds ``tol`` (relative to the size of
    ``M``); ``residual`` is then the evidence.
    """
    M = np.asarray(M, dtype=float)
    p = np.asarray(p, dtype=float)
    if not np.any(p):
        raise DomainError("p = 0: the p (x) p coefficient is not recoverable")
    n = ms.n
    g0 = ms.g_inv @ p
    two_t = float(p @ g0)
    # g^ij M_ij = n u + 2t v ;  g^0i g^0j M_ij = 2t u + 4t^2 v
    lhs = np.array([[n, two_t], [two_t, two_t**2]])
    rhs = np.array([np.einsum("ij,ij", ms.g_inv, M), g0 @ M @ g0])
    u, v = np.linalg.solve(lhs, rhs)
    residual = float(np.max(np.abs(M - u * ms.g - v * np.outer(p, p))))
    scale = max(1.0, float(np.max(np.abs(M))))
    return Lemma1Decomposition(float(u), float(v), residual, residual <= tol * scale)


@dataclass(frozen=True)
class BundlePoint:
    """Everything evaluated at one point of T*M for a given structure."""

    pt: CotangentPoint
    ms: MetricSample
    frame: AdaptedFrame
    coeffs: CoefficientSet
    st: StructureTensors

    @cached_property
    def J(self) -> np.ndarray:
        return full_matrices(self.st)[0]

    @cached_property
    def G(self) -> np.ndarray:
        return full_matrices(self.st)[1]

    @property
    def t(self) -> float:
        return self.st.t


@dataclass(frozen=True)
class NaturalStructure:
    """A natural diagonal structure (G, J) on T*M over a space-form chart.

    The offsets build deliberately broken variants used as test controls:
    ``b1_offset`` shifts b1 away from its integrable value, ``mu_offset``
    makes ``mu = lambda' + mu_offset`` (Hermitian but not Kahler) and
    ``d2_offset`` perturbs the vertical metric block.
    """

    chart: SpaceFormChart
    family: LambdaFamily
    b1_offset: float = 0.0
    mu_offset: float = 0.0
    d2_offset: float = 0.0

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def c(self) -> float:
        return self.chart.c

    @property
    def A(self) -> float:
        return self.family.A

    def coefficients(self, t: float) -> CoefficientSet:
        base = coefficients(self.family, self.c, t)
        if not (self.b1_offset or self.mu_offset or self.d2_offset):
            return base
        mu = base.lambda_prime + self.mu_offset if self.mu_offset else None
        b1 = base.b1 + self.b1_offset if self.b1_offset else None
        shifted = coefficients(self.family, self.c, t, mu=mu, b1=b1)
        return replace(shifted, d2=shifted.d2 + self.d2_offset)

    def rates(self, t: float):
        return coefficient_rates(self.family, self.c, t, mu_offset=self.mu_offset)

    def at(self, x, p=None, *, check_positive: bool = True) -> BundlePoint:
        pt = x if isinstance(x, CotangentPoint) else CotangentPoint(x, p)
        ms = metric_at(self.chart, pt.x)
        t = energy_density(ms, pt.p)
        coeffs = self.coefficients(t)
        st = structure_tensors(coeffs, ms, pt, check_positive=check_positive)
        return BundlePoint(pt=pt, ms=ms, frame=adapted_frame(ms, pt), coeffs=coeffs, st=st)

    def at_z(self, z, *, check_positive: bool = False) -> BundlePoint:
        return self.at(CotangentPoint.from_z(z), check_positive=check_positive)
