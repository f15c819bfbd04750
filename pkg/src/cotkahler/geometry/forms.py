"""The fundamental 2-form phi(X, Y) = G(X, JY) and its exterior derivative.

Forms are evaluated with the determinant convention
``(a ^ b ^ c)(X, Y, Z) = det[[a(X), a(Y), a(Z)], ...]``, the one under which
``phi(dp_i, dq_j) = lambda delta^i_j + mu g^{0i} p_j`` equals the coefficient of
``Dp_i ^ dq^j``.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..bundle import BundlePoint, CotangentPoint, NaturalStructure
from .frame import coordinate_derivatives

# One-half prefactor of the literal closed form.  The numerical exterior
# derivative matches a prefactor of 1 instead.
LITERAL_DPHI_FACTOR = 0.5


def phi_frame(bp: BundlePoint) -> np.ndarray:
    """phi(E_a, E_b) = G_ac J^c_b."""
    return bp.G @ bp.J


def phi_coordinates(bp: BundlePoint) -> np.ndarray:
    """Components of phi on the coordinate fields d/dz^alpha."""
    inv = bp.frame.inverse
    return inv.T @ phi_frame(bp) @ inv


def dphi_numeric(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None) -> np.ndarray:
    """dphi(d_a, d_b, d_c) = d_a phi_bc + d_b phi_ca + d_c phi_ab by central differences."""
    bp = cfg.at(pt, check_positive=False)
    d = coordinate_derivatives(cfg, bp, phi_coordinates, h)
    return d + np.einsum("bca->abc", d) + np.einsum("cab->abc", d)


def _alternate(T: np.ndarray) -> np.ndarray:
    out = np.zeros_like(T)
    for perm in itertools.permutations(range(3)):
        sign = np.linalg.det(np.eye(3)[list(perm)])
        out += sign * np.transpose(T, perm)
    return out


def theorem_three_form(bp: BundlePoint) -> np.ndarray:
    """Coordinate components of g^{0h} Dp_h ^ Dp_i ^ dq^i."""
    n = bp.ms.n
    inv = bp.frame.inverse
    dq, Dp = inv[:n], inv[n:]  # rows: covectors in coordinate components
    T = np.einsum("h,ha,ib,ic->abc", bp.frame.g0, Dp, Dp, dq)
    return _alternate(T)


def dphi_closed_form(cfg: NaturalStructure, pt: CotangentPoint,
                     factor: float = 1.0) -> np.ndarray:
    """factor * (lambda' - mu) * g^{0h} Dp_h ^ Dp_i ^ dq^i in coordinates."""
    bp = cfg.at(pt, check_positive=False)
    k = bp.coeffs
    return factor * (k.lambda_prime - k.mu) * theorem_three_form(bp)


def dphi_residual(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None) -> float:
    """max-abs component of dphi; vanishes exactly when mu = lambda'."""
    return float(np.max(np.abs(dphi_numeric(cfg, pt, h))))
