"""Generalized inverses: A^(B) = (A B B^+)^+ and the families it specializes to.

Each inverse that admits several representations can be computed by any of
them through a :class:`Route`; agreement between routes is checked by the test
suite, never averaged here.
"""

from __future__ import annotations

import enum

import numpy as np

from . import decomp
from .errors import DimensionMismatch, NotSquare, ZeroMatrix
from .matcore import (
    ToleranceConfig,
    as_matrix,
    ctranspose,
    matrix_index,
    norm2,
    pinv,
    power,
    product_scale,
    range_projector,
    rank,
    truncated,
)


class Route(enum.Enum):
    # A^(B)
    DEFINITION = "definition"
    PAIR_SVD = "pair-svd"
    CORE_EP_PAIR = "core-ep-pair"
    PRODUCT_FORM = "product-form"
    # core-EP and weighted core-EP
    DIRECT_FORMULA = "direct"
    VIA_DRAZIN = "via-drazin"
    VIA_GENINV_WRT = "via-geninv-wrt"
    PROJECTOR_FORMULA = "projector"


GENINV_WRT_ROUTES = (Route.DEFINITION, Route.PAIR_SVD, Route.CORE_EP_PAIR, Route.PRODUCT_FORM)
CORE_EP_ROUTES = (Route.DIRECT_FORMULA, Route.VIA_DRAZIN, Route.VIA_GENINV_WRT)
W_CORE_EP_ROUTES = (Route.DIRECT_FORMULA, Route.PROJECTOR_FORMULA, Route.VIA_GENINV_WRT)


def _route(route, allowed):
    route = Route(route)
    if route not in allowed:
        names = ", ".join(r.value for r in allowed)
        raise ValueError(f"route {route.value!r} not available here; choose one of {names}")
    return route


def _square(A, name="A"):
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"{name} must be square, got {A.shape}")
    return A


def _zeros(m, n):
    return np.zeros((m, n), dtype=np.complex128)


def geninv_wrt(A, B, cfg: ToleranceConfig | None = None, route=Route.DEFINITION) -> np.ndarray:
    """Generalized inverse of A with respect to B, ``(A B B^+)^+``.

    Parameters
    ----------
    A, B : (n, n) array_like
    cfg : ToleranceConfig, optional
    route : Route or str
        ``definition``: ``pinv(A B B^+)``.
        ``pair-svd``: ``V [pinv(Sa A1), 0; 0, 0] U*`` from
        :func:`decomp.pair_svd_decomposition` (needs A, B nonzero).
        ``core-ep-pair``: block pseudoinverse of ``U [A1, A12 P_B2; 0, A2 P_B2] V*``
        built from :func:`decomp.core_ep_pair_decomposition` (needs AB not
        nilpotent).
        ``product-form``: ``B pinv(A B)``.  This is the outer inverse of A with
        range R(BB*A*) and null space N((AB)*), so it equals A^(B) only when
        R(BB*A*) = R(BB^+A*), e.g. when rank(AB) = rank(B) or when B is a
        multiple of a partial isometry.  Elsewhere it is a different matrix:
        A = [[1, 0], [0, 0]], B = [[1, 0], [1, 1]] give A^(B) = A but
        B pinv(AB) = [[1, 0], [1, 0]].
    """
    A, B = _square(A), _square(B, "B")
    if A.shape != B.shape:
        raise DimensionMismatch(f"A is {A.shape} but B is {B.shape}")
    route = _route(route, GENINV_WRT_ROUTES)
    n = A.shape[0]

    if route is Route.DEFINITION:
        Bp = pinv(B, cfg)
        return pinv(A @ B @ Bp, cfg, scale=product_scale(A, B, Bp))

    if route is Route.PRODUCT_FORM:
        return B @ pinv(A @ B, cfg, scale=product_scale(A, B))

    if route is Route.PAIR_SVD:
        d = decomp.pair_svd_decomposition(A, B, cfg)
        a = norm2(A)
        small = pinv(truncated(d.Sigma_A @ d.A1, cfg, scale=a), cfg, scale=a)
        M = _zeros(n, n)
        M[: d.s, : d.r] = small
        return d.V @ M @ ctranspose(d.U)

    d = decomp.core_ep_pair_decomposition(A, B, cfg)
    t = d.t
    # P_B = V diag(I_t, P_B2) V*; reading P_B2 off P_B keeps the rank decision on B itself
    V2 = d.V[:, t:]
    P_B2 = ctranspose(V2) @ range_projector(B, cfg) @ V2
    # rank(A B B^+) = t + rank(A2 P_B2)
    c3_rank = rank(A @ B, cfg, scale=product_scale(A, B)) - t
    form = decomp.BlockTriangularForm(
        d.U, d.V, d.A1, d.A12 @ P_B2, d.A2 @ P_B2, cfg=cfg, scale=norm2(A), c3_rank=c3_rank
    )
    return decomp.block_pinv(form)


def drazin(A, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Drazin inverse ``A^k pinv(A^(2k+1)) A^k`` with k = Ind(A)."""
    A = _square(A)
    k = matrix_index(A, cfg).index
    Ak = power(A, k, cfg)
    return Ak @ pinv(power(A, 2 * k + 1, cfg), cfg, scale=norm2(A) ** (2 * k + 1)) @ Ak


def core_ep(A, cfg: ToleranceConfig | None = None, route=Route.DIRECT_FORMULA) -> np.ndarray:
    """Core-EP inverse of a square matrix.

    ``direct``: ``A^k pinv((A*)^k A^(k+1)) (A*)^k``; ``via-geninv-wrt``:
    ``geninv_wrt(A, A^k)``; ``via-drazin``: ``A^D pinv(A A^D)``.
    """
    A = _square(A)
    route = _route(route, CORE_EP_ROUTES)
    if route is Route.VIA_DRAZIN:
        D = drazin(A, cfg)
        return D @ pinv(A @ D, cfg, scale=product_scale(A, D))
    k = matrix_index(A, cfg).index
    Ak = power(A, k, cfg)
    if route is Route.VIA_GENINV_WRT:
        return geninv_wrt(A, Ak, cfg)
    Akh = ctranspose(Ak)
    core = Akh @ power(A, k + 1, cfg)
    return Ak @ pinv(core, cfg, scale=norm2(A) ** (2 * k + 1)) @ Akh


def bt(A, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """BT inverse ``pinv(A P_A)``."""
    A = _square(A)
    P = A @ pinv(A, cfg)
    return pinv(A @ P, cfg, scale=norm2(A))


def _weighted_pair(A, W):
    A, W = as_matrix(A), as_matrix(W)
    m, n = A.shape
    if W.shape != (n, m):
        raise DimensionMismatch(f"W must be {n} x {m} for A of shape {A.shape}, got {W.shape}")
    return A, W


def w_bt(A, W, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """W-weighted BT inverse ``pinv(W A W A W pinv(A W))`` (A m x n, W n x m)."""
    A, W = _weighted_pair(A, W)
    return _w_bt(A, W, cfg)


def _w_bt(A, W, cfg):
    AW = A @ W
    AWp = pinv(AW, cfg, scale=product_scale(A, W))
    C = W @ AW @ AW @ AWp
    return pinv(C, cfg, scale=product_scale(W, A, W, A, W, AWp))


def _weighted_index(A, W, cfg, only_aw=False):
    k = matrix_index(A @ W, cfg).index
    if only_aw:
        return k
    return max(k, matrix_index(W @ A, cfg).index)


def w_core_ep(A, W, cfg: ToleranceConfig | None = None, route=Route.DIRECT_FORMULA) -> np.ndarray:
    """W-weighted core-EP inverse (A m x n, W n x m, W nonzero).

    ``direct``: ``pinv(W A W (AW)^k pinv((AW)^k))`` with
    k = max(Ind(AW), Ind(WA)); ``projector``: ``pinv(W A W P_((AW)^k))`` with
    k = Ind(AW); ``via-geninv-wrt``: ``geninv_wrt(W A W, (AW)^k)``, square only.
    """
    A, W = _weighted_pair(A, W)
    route = _route(route, W_CORE_EP_ROUTES)
    if not np.any(W):
        raise ZeroMatrix("W is the zero matrix")
    if route is Route.VIA_GENINV_WRT:
        if A.shape[0] != A.shape[1]:
            raise NotSquare(f"route via-geninv-wrt needs square A and W, got {A.shape}")
        k = _weighted_index(A, W, cfg)
        return geninv_wrt(W @ A @ W, power(A @ W, k, cfg), cfg)
    return _w_core_ep(A, W, cfg, only_aw=route is Route.PROJECTOR_FORMULA)


def _w_core_ep(A, W, cfg, only_aw=False):
    AW = A @ W
    k = _weighted_index(A, W, cfg, only_aw)
    Pk = power(AW, k, cfg)
    if only_aw:
        P = range_projector(Pk, cfg, scale=norm2(AW) ** k)
    else:
        P = Pk @ pinv(Pk, cfg, scale=norm2(AW) ** k)
    return pinv(W @ AW @ P, cfg, scale=product_scale(W, A, W))


def _small_w_bt_projected(A, W, cfg):
    # (W A W P_A)^+ : the projector is onto R(A), not R(AW)
    P = range_projector(A, cfg, scale=norm2(A))
    return pinv(W @ A @ W @ P, cfg, scale=product_scale(W, A, W))


def _block_form(A, W, cfg, inner):
    A, W = _square(A), _square(W, "W")
    if A.shape != W.shape:
        raise DimensionMismatch(f"A is {A.shape} but W is {W.shape}")
    d = decomp.pair_svd_decomposition(A, W, cfg)
    a_small = truncated(d.Sigma_A @ d.A1, cfg, scale=norm2(A))
    w_small = truncated(d.Sigma_B @ d.B1, cfg, scale=norm2(W))
    n = A.shape[0]
    M = _zeros(n, n)
    M[: d.r, : d.s] = inner(a_small, w_small, cfg)
    return d.U @ M @ ctranspose(d.V)


def w_core_ep_block_form(A, W, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """W-weighted core-EP inverse assembled from the simultaneous SVD factorization.

    With ``A = U [Sa A1, Sa A2; 0, 0] V*`` and ``W = V [Sw W1, Sw W2; 0, 0] U*``
    the result is ``U [X1, 0; 0, 0] V*`` where X1 is the weighted core-EP
    inverse of ``Sa A1`` with weight ``Sw W1``.
    """
    return _block_form(A, W, cfg, _w_core_ep)


def w_bt_block_form(A, W, cfg: ToleranceConfig | None = None, literal_inner: bool = False) -> np.ndarray:
    """Weighted BT inverse assembled from the simultaneous SVD factorization.

    The result is ``U [(Sw W1 Sa A1 Sw W1 P)^+, 0; 0, 0] V*`` with P the
    projector onto R(Sa A1), which equals ``w_bt(A, W)`` for every pair.

    With ``literal_inner=True`` the corner block is instead the weighted BT
    inverse of ``Sa A1`` with weight ``Sw W1``, whose projector is onto
    R(Sa A1 Sw W1).  The two agree when rank(Sa A1 Sw W1) == rank(Sa A1) and
    differ in general otherwise, even when rank(AW) == rank(A).
    """
    return _block_form(A, W, cfg, _w_bt if literal_inner else _small_w_bt_projected)
