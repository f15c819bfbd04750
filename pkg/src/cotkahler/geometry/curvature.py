"""Curvature of the Levi-Civita connection of G.

Full arrays use ``K[e, c, a, b]`` with ``K(E_a, E_b) E_c = K[e, c, a, b] E_e``
and ``K(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bundle import BundlePoint, CotangentPoint, NaturalStructure, StructureTensors
from ..errors import DomainError
from .connection import frame_connection
from .frame import frame_derivatives, structure_constants


@dataclass(frozen=True)
class CurvatureBlocks:
    """Six block families, each stored as ``[i, j, k, h]``.

    Name ``xy_z``: arguments of types x, y (h = horizontal dq, v = vertical dp),
    result of type z.  Entry ``[i, j, k, h]`` is the ``h`` component of
    ``K(E_i, E_j) E_k``:

    ``hh_h``  K(dq_i, dq_j) dq_k    ``hh_v``  K(dq_i, dq_j) dp_k
    ``vv_h``  K(dp_i, dp_j) dq_k    ``vv_v``  K(dp_i, dp_j) dp_k
    ``vh_v``  K(dp_i, dq_j) dq_k    ``vh_h``  K(dp_i, dq_j) dp_k
    """

    hh_h: np.ndarray
    hh_v: np.ndarray
    vv_h: np.ndarray
    vv_v: np.ndarray
    vh_v: np.ndarray
    vh_h: np.ndarray

    @property
    def n(self) -> int:
        return self.hh_h.shape[0]

    def full(self) -> np.ndarray:
        n = self.n
        K = np.zeros((2 * n,) * 4)
        H, V = slice(0, n), slice(n, 2 * n)

        def put(e, c, a, b, blk):
            K[e, c, a, b] = np.einsum("ijkh->hkij", blk)

        put(H, H, H, H, self.hh_h)
        put(V, V, H, H, self.hh_v)
        put(H, H, V, V, self.vv_h)
        put(V, V, V, V, self.vv_v)
        put(V, H, V, H, self.vh_v)
        put(H, V, V, H, self.vh_h)
        K[V, H, H, V] = -np.einsum("ijkh->hkji", self.vh_v)
        K[H, V, H, V] = -np.einsum("ijkh->hkji", self.vh_h)
        return K

    @classmethod
    def from_full(cls, K: np.ndarray) -> "CurvatureBlocks":
        n = K.shape[0] // 2
        H, V = slice(0, n), slice(n, 2 * n)

        def take(e, c, a, b):
            return np.einsum("hkij->ijkh", K[e, c, a, b])

        return cls(hh_h=take(H, H, H, H), hh_v=take(V, V, H, H), vv_h=take(H, H, V, V),
                   vv_v=take(V, V, V, V), vh_v=take(V, H, V, H), vh_h=take(H, V, V, H))


def _blocks(cfg: NaturalStructure, bp: BundlePoint) -> CurvatureBlocks:
    st, k = bp.st, bp.coeffs
    f = cfg.c / cfg.A
    eye = np.eye(bp.ms.n)
    J1, J2, G1, G2 = st.J1, st.J2, st.G1, st.G2
    # d/dp_i (lambda p_j) = lambda' g^{0i} p_j + lambda delta^i_j
    L = k.lambda_prime * np.outer(bp.frame.g0, bp.pt.p) + k.lambda_ * eye
    return CurvatureBlocks(
        hh_h=f * (np.einsum("hi,jk->ijkh", eye, G1) - np.einsum("hj,ik->ijkh", eye, G1)),
        hh_v=f * (np.einsum("sk,js,ih->ijkh", G2, J1, J1) - np.einsum("sk,is,jh->ijkh", G2, J1, J1)),
        vv_h=f * (np.einsum("sk,js,ih->ijkh", G1, J2, J2) - np.einsum("sk,is,jh->ijkh", G1, J2, J2)),
        vv_v=f * (np.einsum("ih,jk->ijkh", eye, G2) - np.einsum("jh,ik->ijkh", eye, G2)),
        vh_v=f * np.einsum("kh,ij->ijkh", J1, L),
        vh_h=-f * np.einsum("kh,ij->ijkh", J2, L),
    )


def curvature_blocks(cfg: NaturalStructure, pt: CotangentPoint | BundlePoint) -> CurvatureBlocks:
    """Closed-form curvature blocks over a space form (only lambda, lambda' enter)."""
    bp = pt if isinstance(pt, BundlePoint) else cfg.at(pt)
    return _blocks(cfg, bp)


def curvature_full(cfg: NaturalStructure, bp: BundlePoint) -> np.ndarray:
    return _blocks(cfg, bp).full()


def curvature_oracle_full(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None,
                          path: str = "generic") -> np.ndarray:
    """K from nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.

    Frame derivatives of the analytic connection coefficients are finite
    differences; brackets are the closed-form structure constants.
    """
    bp = cfg.at(pt)
    conn = frame_connection(cfg, bp, path)
    C = structure_constants(bp)
    dconn = frame_derivatives(cfg, bp, lambda q: frame_connection(cfg, q, path), h)  # [a, e, b, c]
    return (np.einsum("aebc->ecab", dconn) - np.einsum("beac->ecab", dconn)
            + np.einsum("dbc,ead->ecab", conn, conn) - np.einsum("dac,ebd->ecab", conn, conn)
            - np.einsum("dab,edc->ecab", C, conn))


def curvature_oracle(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None) -> CurvatureBlocks:
    return CurvatureBlocks.from_full(curvature_oracle_full(cfg, pt, h))


@dataclass(frozen=True)
class RicciBlocks:
    ric_hh: np.ndarray
    ric_vv: np.ndarray
    ric_mixed: np.ndarray  # ric_mixed[i, j] = Ric(dp_i, dq_j)


def ricci_from_full(K: np.ndarray) -> np.ndarray:
    """Ric[y, z] = trace(X -> K(X, Y) Z)."""
    return np.einsum("azay->yz", K)


def ricci_blocks(kb: CurvatureBlocks, st: StructureTensors | None = None) -> RicciBlocks:
    """Trace the curvature over the full adapted frame.

    ``st`` is accepted for interface symmetry with the comparison against G.
    """
    n = kb.n
    ric = ricci_from_full(kb.full())
    return RicciBlocks(ric_hh=ric[:n, :n], ric_vv=ric[n:, n:], ric_mixed=ric[n:, :n])


def einstein_residual(cfg: NaturalStructure, pt: CotangentPoint | BundlePoint) -> float:
    bp = pt if isinstance(pt, BundlePoint) else cfg.at(pt)
    rb = ricci_blocks(curvature_blocks(cfg, bp), bp.st)
    k = cfg.c * cfg.n / cfg.A
    n = cfg.n
    ric = ricci_from_full(curvature_full(cfg, bp))
    return max(float(np.max(np.abs(rb.ric_hh - k * bp.st.G1))),
               float(np.max(np.abs(rb.ric_vv - k * bp.st.G2))),
               float(np.max(np.abs(ric[:n, n:]))), float(np.max(np.abs(rb.ric_mixed))))


def curvature_symmetry_residual(cfg: NaturalStructure, pt: CotangentPoint | BundlePoint) -> float:
    """max |G(K(X,Y)Z, W) + G(K(X,Y)W, Z)| over frame quadruples."""
    bp = pt if isinstance(pt, BundlePoint) else cfg.at(pt)
    low = np.einsum("we,ecab->wcab", bp.G, curvature_full(cfg, bp))
    return float(np.max(np.abs(low + np.einsum("wcab->cwab", low))))


def nabla_K_full(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None,
                 path: str = "generic") -> np.ndarray:
    """``nK[w, e, c, a, b] = (nabla_{E_w} K)^e_{cab}`` of the closed-form K."""
    bp = cfg.at(pt)
    conn = frame_connection(cfg, bp, path)
    K = curvature_full(cfg, bp)
    dK = frame_derivatives(cfg, bp, lambda q: curvature_full(cfg, q), h)
    return (dK + np.einsum("ewd,dcab->wecab", conn, K) - np.einsum("dwc,edab->wecab", conn, K)
            - np.einsum("dwa,ecdb->wecab", conn, K) - np.einsum("dwb,ecad->wecab", conn, K))


def nabla_K_residual(cfg: NaturalStructure, pt: CotangentPoint, h: float | None = None) -> float:
    return float(np.max(np.abs(nabla_K_full(cfg, pt, h))))


def holomorphic_sectional_curvature(cfg: NaturalStructure, pt: CotangentPoint | BundlePoint, X) -> float:
    """H(X) = G(K(X, JX) JX, X) / G(X, X)^2 for a frame-component vector X."""
    bp = pt if isinstance(pt, BundlePoint) else cfg.at(pt)
    X = np.asarray(X, dtype=float)
    G, J = bp.G, bp.J
    norm2 = float(X @ G @ X)
    if not norm2 > 1e-24:
        raise DomainError(f"|X|_G = {np.sqrt(max(norm2, 0.0))!r} is too small")
    JX = J @ X
    KX = np.einsum("ecab,a,b,c->e", curvature_full(cfg, bp), X, JX, JX)
    return float(KX @ G @ X) / norm2**2
