"""Nijenhuis tensor of J: closed-form components and a definition-based oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bundle import CotangentPoint, NaturalStructure
from .frame import base_curvature_contracted, frame_derivatives, structure_constants


@dataclass(frozen=True)
class NijenhuisBlocks:
    """Component families of N in the adapted frame.

    ``hh[i, j, k]``: coefficient of d/dp_k in N(dq_i, dq_j)
    ``hv[i, j, k]``: coefficient of dq_k  in N(dq_i, dp_j)
    ``vv[i, j, k]``: coefficient of d/dp_k in N(dp_i, dp_j)
    """

    hh: np.ndarray
    hv: np.ndarray
    vv: np.ndarray

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(b))) for b in (self.hh, self.hv, self.vv))


def blocks_from_full(N: np.ndarray) -> NijenhuisBlocks:
    n = N.shape[0] // 2
    return NijenhuisBlocks(
        hh=np.einsum("kij->ijk", N[n:, :n, :n]),
        hv=np.einsum("kij->ijk", N[:n, :n, n:]),
        vv=np.einsum("kij->ijk", N[n:, n:, n:]),
    )


def full_from_blocks(nb: NijenhuisBlocks) -> np.ndarray:
    """Full ``N[c, a, b]``; every component outside the three families is zero."""
    n = nb.hh.shape[0]
    N = np.zeros((2 * n, 2 * n, 2 * n))
    N[n:, :n, :n] = np.einsum("ijk->kij", nb.hh)
    N[:n, :n, n:] = np.einsum("ijk->kij", nb.hv)
    N[:n, n:, :n] = -np.einsum("ijk->kji", nb.hv)
    N[n:, n:, n:] = np.einsum("ijk->kij", nb.vv)
    return N


def nijenhuis_closed_form(cfg: NaturalStructure, pt: CotangentPoint) -> NijenhuisBlocks:
    """Closed-form components for arbitrary b1 (integrable or not)."""
    bp = cfg.at(pt, check_positive=False)
    k, g, p, J2 = bp.coeffs, bp.ms.g, pt.p, bp.st.J2
    lam, dlam, t, A = k.lambda_, k.lambda_prime, k.t, cfg.A
    F = A / lam**3 * (k.b1 * lam * (lam + 2 * t * dlam) + A * dlam)
    R0 = base_curvature_contracted(bp)
    # bracket[l, k, i, j] = {F (delta^h_i g_jk - delta^h_j g_ik) + R^h_kij} p_h, indices renamed per family
    core = F * (np.einsum("i,jk->kij", p, g) - np.einsum("j,ik->kij", p, g)) + R0  # core[k, i, j]
    hh = -np.einsum("kij->ijk", core)
    hv = -np.einsum("kl,jr,lir->ijk", J2, J2, core)
    vv = -np.einsum("ir,jl,klr->ijk", J2, J2, core)
    return NijenhuisBlocks(hh=hh, hv=hv, vv=vv)


def nijenhuis_full_oracle(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None) -> np.ndarray:
    """``N[c, a, b]`` from N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] on frame fields.

    Brackets of frame fields use the closed-form structure constants; the
    derivatives of the J components are finite differences.
    """
    bp = cfg.at(pt, check_positive=False)
    J = bp.J
    C = structure_constants(bp)
    dJ = frame_derivatives(cfg, bp, lambda q: q.J, h)  # dJ[d, c, b] = E_d(J^c_b)
    jxjy = (np.einsum("da,dcb->cab", J, dJ) - np.einsum("db,dca->cab", J, dJ)
            + np.einsum("da,eb,cde->cab", J, J, C))
    jx_y = np.einsum("da,edb->eab", J, C) - np.einsum("bea->eab", dJ)
    x_jy = np.einsum("aeb->eab", dJ) + np.einsum("db,ead->eab", J, C)
    return jxjy - np.einsum("ce,eab->cab", J, jx_y + x_jy) - C


def nijenhuis_oracle(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None) -> NijenhuisBlocks:
    return blocks_from_full(nijenhuis_full_oracle(cfg, pt, h))
