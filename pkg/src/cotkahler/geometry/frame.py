"""Adapted-frame calculus: brackets of the frame fields and frame derivatives.

A vector field is handled through its components in the adapted frame
``E_a``; ``E_a(f)`` for a component function ``f`` is the derivative of ``f``
along the coordinate vector ``basis_change[:, a]``, taken by Richardson
central differences in ``z = (q, p)``.
"""

from __future__ import annotations

import numpy as np

from .._fd import jacobian_along
from ..bundle import BundlePoint, NaturalStructure

FD_TOL = 1e-5


def default_step(bp: BundlePoint) -> float:
    scale = max(1.0, float(np.linalg.norm(bp.pt.x)), float(np.linalg.norm(bp.pt.p)))
    return 1e-4 * scale


def base_curvature_contracted(bp: BundlePoint) -> np.ndarray:
    """``R0[k, i, j] = p_h R^h_{kij}``."""
    return np.einsum("h,hkij->kij", bp.pt.p, bp.ms.riemann)


def structure_constants(bp: BundlePoint) -> np.ndarray:
    """``C[c, a, b]`` with ``[E_a, E_b] = C^c_{ab} E_c`` from the closed-form brackets.

    [dp_i, dp_j] = 0, [dp_i, dq_j] = Gamma^i_jk dp_k, [dq_i, dq_j] = R0_kij dp_k.
    """
    n = bp.ms.n
    C = np.zeros((2 * n, 2 * n, 2 * n))
    gam = bp.ms.gamma  # gam[i, j, k] = Gamma^i_jk
    C[n:, n:, :n] = np.einsum("ijk->kij", gam)
    C[n:, :n, n:] = -np.einsum("ijk->kji", gam)
    C[n:, :n, :n] = base_curvature_contracted(bp)
    return C


def frame_derivatives(cfg: NaturalStructure, bp: BundlePoint, func, h: float | None = None,
                      *, tol: float = FD_TOL) -> np.ndarray:
    """``out[a, ...] = E_a(func)`` at ``bp``; ``func`` maps a BundlePoint to an array."""
    h = default_step(bp) if h is None else float(h)
    return jacobian_along(lambda z: func(cfg.at_z(z)), bp.pt.z, bp.frame.basis_change.T, h, tol=tol)


def coordinate_derivatives(cfg: NaturalStructure, bp: BundlePoint, func, h: float | None = None,
                           *, tol: float = FD_TOL) -> np.ndarray:
    """``out[alpha, ...] = d func / d z^alpha`` (coordinate partials)."""
    h = default_step(bp) if h is None else float(h)
    return jacobian_along(lambda z: func(cfg.at_z(z)), bp.pt.z, np.eye(bp.pt.z.size), h, tol=tol)


def bracket_oracle(cfg: NaturalStructure, bp: BundlePoint, h: float | None = None) -> np.ndarray:
    """Structure constants from coordinate derivatives of the frame fields themselves."""
    dB = frame_derivatives(cfg, bp, lambda q: q.frame.basis_change, h)  # dB[a, alpha, b]
    coord = dB - np.einsum("bxa->axb", dB)  # [E_a, E_b]^alpha at [a, alpha, b]
    return np.einsum("cx,axb->cab", bp.frame.inverse, coord)


def horizontal_energy_residual(cfg: NaturalStructure, bp: BundlePoint, h: float | None = None) -> float:
    """max_k |delta/delta q^k t|, which must vanish; also checks d/dp_k t = g^{0k}."""
    n = bp.ms.n
    dt = frame_derivatives(cfg, bp, lambda q: np.array(q.t), h)
    return max(float(np.max(np.abs(dt[:n]))), float(np.max(np.abs(dt[n:] - bp.frame.g0))))
