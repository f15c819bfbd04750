"""Levi-Civita connection of G in the adapted frame.

``conn[e, a, b]`` denotes the frame coefficients with
``nabla_{E_a} E_b = conn[e, a, b] E_e``.  They are assembled from the base
Christoffel symbols and three M-tensors:

    nabla_{dp_i} dp_j = Q^{ij}_h dp_h
    nabla_{dq_i} dp_j = -Gamma^j_ih dp_h + P^{hj}_i dq_h
    nabla_{dp_i} dq_j = P^{hi}_j dq_h
    nabla_{dq_i} dq_j = Gamma^h_ij dq_h + S_hij dp_h

Storage: ``Q[i, j, h]``, ``P[h, i, j] = P^{hi}_j``, ``S[h, i, j]``.

Two evaluation paths exist.  The generic one builds Q, P, S from fiber
derivatives of the metric blocks (valid for any natural diagonal G) and is the
reference.  The specialised one uses the simplified space-form expressions for
P and S.  The literal closed-form Q has two coefficients that disagree with
the generic path, so the specialised path takes Q from the generic one and the
literal form is exposed separately as :func:`literal_q`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bundle import BundlePoint, CotangentPoint, NaturalStructure
from .frame import base_curvature_contracted, frame_derivatives, structure_constants


@dataclass(frozen=True)
class ConnectionCoeffs:
    Q: np.ndarray
    P: np.ndarray
    S: np.ndarray
    gamma: np.ndarray

    def frame_array(self) -> np.ndarray:
        n = self.gamma.shape[0]
        conn = np.zeros((2 * n, 2 * n, 2 * n))
        conn[n:, n:, n:] = np.einsum("ijh->hij", self.Q)
        conn[n:, :n, n:] = -np.einsum("jih->hij", self.gamma)
        conn[:n, :n, n:] = np.einsum("hji->hij", self.P)
        conn[:n, n:, :n] = self.P
        conn[:n, :n, :n] = self.gamma
        conn[n:, :n, :n] = self.S
        return conn


def fiber_derivatives(cfg: NaturalStructure, bp: BundlePoint) -> tuple[np.ndarray, np.ndarray]:
    """Analytic ``dG1[k, i, j] = d/dp_k G1_ij`` and ``dG2[k, i, j] = d/dp_k G2^ij``."""
    k, r = bp.coeffs, cfg.rates(bp.t)
    g, gi, p, g0 = bp.ms.g, bp.ms.g_inv, bp.pt.p, bp.frame.g0
    eye = np.eye(bp.ms.n)
    dG1 = (r.dc1 * np.einsum("k,ij->kij", g0, g) + r.dd1 * np.einsum("k,i,j->kij", g0, p, p)
           + k.d1 * (np.einsum("ki,j->kij", eye, p) + np.einsum("kj,i->kij", eye, p)))
    dG2 = (r.dc2 * np.einsum("k,ij->kij", g0, gi) + r.dd2 * np.einsum("k,i,j->kij", g0, g0, g0)
           + k.d2 * (np.einsum("ik,j->kij", gi, g0) + np.einsum("i,jk->kij", g0, gi)))
    return dG1, dG2


def generic_coeffs(cfg: NaturalStructure, bp: BundlePoint) -> ConnectionCoeffs:
    st = bp.st
    R0 = base_curvature_contracted(bp)
    dG1, dG2 = fiber_derivatives(cfg, bp)
    Q = 0.5 * np.einsum("hk,ijk->ijh", st.H2,
                        np.einsum("ijk->ijk", dG2) + np.einsum("jik->ijk", dG2) - np.einsum("kij->ijk", dG2))
    P = 0.5 * np.einsum("hk,ijk->hij", st.H1, dG1 - np.einsum("il,ljk->ijk", st.G2, R0))
    S = -0.5 * np.einsum("hk,kij->hij", st.H2, dG1) + 0.5 * R0
    return ConnectionCoeffs(Q=Q, P=P, S=S, gamma=bp.ms.gamma)


def literal_q(cfg: NaturalStructure, bp: BundlePoint) -> np.ndarray:
    """Literal closed-form Q for a space-form base, kept for comparison only."""
    k = bp.coeffs
    lam, dlam, t, A, c = k.lambda_, k.lambda_prime, k.t, cfg.A, cfg.c
    p, g0 = bp.pt.p, bp.frame.g0
    eye = np.eye(bp.ms.n)
    m = lam + 2 * t * dlam
    return ((c * lam**3 + A**2 * dlam) / (A * lam * m) * np.einsum("ij,h->ijh", bp.st.J2, p)
            + dlam / lam**2 * (np.einsum("hi,j->ijh", eye, g0) + np.einsum("hj,i->ijh", eye, g0))
            + (lam * dlam - 3 * dlam**2) / (lam * m) * np.einsum("i,j,h->ijh", g0, g0, p))


def specialised_ps(cfg: NaturalStructure, bp: BundlePoint) -> tuple[np.ndarray, np.ndarray]:
    lam = bp.coeffs.lambda_
    f = cfg.c * lam / cfg.A
    p = bp.pt.p
    P = -f * np.einsum("hi,j->hij", bp.st.J2, p)
    S = f * np.einsum("hj,i->hij", bp.st.J1, p)
    return P, S


def connection_coeffs(cfg: NaturalStructure, pt: CotangentPoint | BundlePoint,
                      path: str = "specialised") -> ConnectionCoeffs:
    """Q, P, S at a point.

    ``path``: ``"specialised"`` (space-form P, S; generic Q), ``"generic"``
    (all from metric fiber derivatives) or ``"literal"`` (specialised with the
    literal closed-form Q).
    """
    bp = pt if isinstance(pt, BundlePoint) else cfg.at(pt)
    generic = generic_coeffs(cfg, bp)
    if path == "generic":
        return generic
    P, S = specialised_ps(cfg, bp)
    if path == "specialised":
        return ConnectionCoeffs(Q=generic.Q, P=P, S=S, gamma=bp.ms.gamma)
    if path == "literal":
        return ConnectionCoeffs(Q=literal_q(cfg, bp), P=P, S=S, gamma=bp.ms.gamma)
    raise ValueError(f"unknown connection path {path!r}")


def frame_connection(cfg: NaturalStructure, bp: BundlePoint, path: str = "specialised") -> np.ndarray:
    return connection_coeffs(cfg, bp, path).frame_array()


def koszul_oracle(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None) -> np.ndarray:
    """Frame connection coefficients from the Koszul formula.

    2 G(nabla_a E_b, E_c) = E_a G_bc + E_b G_ac - E_c G_ab
                            + G([E_a,E_b],E_c) - G([E_a,E_c],E_b) - G([E_b,E_c],E_a)
    with finite-difference frame derivatives of the G components.
    """
    bp = cfg.at(pt)
    G = bp.G
    cond = np.linalg.cond(G)
    if cond > 1e12:
        raise np.linalg.LinAlgError(f"G is ill-conditioned at this point (cond = {cond:.3e})")
    C = structure_constants(bp)
    dG = frame_derivatives(cfg, bp, lambda q: q.G, h)  # dG[a, b, c] = E_a(G_bc)
    rhs = (dG + np.einsum("bac->abc", dG) - np.einsum("cab->abc", dG)
           + np.einsum("dab,dc->abc", C, G) - np.einsum("dac,db->abc", C, G)
           - np.einsum("dbc,da->abc", C, G))
    return 0.5 * np.einsum("ec,abc->eab", np.linalg.inv(G), rhs)


def torsion_residual(cfg: NaturalStructure, pt: CotangentPoint, path: str = "specialised") -> float:
    bp = cfg.at(pt)
    conn = frame_connection(cfg, bp, path)
    T = conn - np.einsum("eba->eab", conn) - structure_constants(bp)
    return float(np.max(np.abs(T)))


def parallel_residuals(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None,
                       path: str = "specialised") -> tuple[float, float]:
    """max-abs components of nabla G and nabla J (finite-difference frame derivatives)."""
    bp = cfg.at(pt)
    conn = frame_connection(cfg, bp, path)
    G, J = bp.G, bp.J
    dG = frame_derivatives(cfg, bp, lambda q: q.G, h)
    dJ = frame_derivatives(cfg, bp, lambda q: q.J, h)
    nabla_g = dG - np.einsum("dab,dc->abc", conn, G) - np.einsum("dac,bd->abc", conn, G)
    nabla_j = dJ + np.einsum("cad,db->acb", conn, J) - np.einsum("cd,dab->acb", J, conn)
    return float(np.max(np.abs(nabla_g))), float(np.max(np.abs(nabla_j)))
