"""Pair factorizations and the block-triangular pseudoinverse formula.

Decompositions are unique only up to unitary freedom in the frames, so the
returned factors should be compared through reconstructions and block
identities, never entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NilpotentProduct,
    NotSquare,
    PreconditionError,
    SingularLeadingBlock,
    ZeroMatrix,
)
from .matcore import (
    ToleranceConfig,
    _cfg,
    as_matrix,
    complement_basis,
    ctranspose,
    eye,
    fro,
    matrix_index,
    mpow,
    norm2,
    pinv,
    pinv_of_rank,
    range_basis,
    rank_cutoff,
    svd,
)


def _zeros(m, n):
    return np.zeros((m, n), dtype=np.complex128)


@dataclass(frozen=True)
class PairSvdDecomposition:
    """``A = U [Sa A1, Sa A2; 0, 0] V*`` and ``B = V [Sb B1, Sb B2; 0, 0] U*``.

    ``Sigma_A`` and ``Sigma_B`` hold the positive singular values of A and B;
    ``[A1, A2]`` and ``[B1, B2]`` have orthonormal rows.
    """

    U: np.ndarray
    V: np.ndarray
    Sigma_A: np.ndarray
    Sigma_B: np.ndarray
    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    r: int
    s: int

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def reconstruct_a(self) -> np.ndarray:
        n, r = self.n, self.r
        top = self.Sigma_A @ np.hstack([self.A1, self.A2])
        return self.U @ np.vstack([top, _zeros(n - r, n)]) @ ctranspose(self.V)

    def reconstruct_b(self) -> np.ndarray:
        n, s = self.n, self.s
        top = self.Sigma_B @ np.hstack([self.B1, self.B2])
        return self.V @ np.vstack([top, _zeros(n - s, n)]) @ ctranspose(self.U)


def _square_pair(A, B):
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"A must be square, got {A.shape}")
    if B.shape[0] != B.shape[1]:
        raise NotSquare(f"B must be square, got {B.shape}")
    if A.shape != B.shape:
        raise DimensionMismatch(f"A is {A.shape} but B is {B.shape}")
    return A, B


def pair_svd_decomposition(A, B, cfg: ToleranceConfig | None = None) -> PairSvdDecomposition:
    """Simultaneous factorization of two nonzero square matrices from their SVDs.

    With ``A = Ua diag(Sa, 0) Va*`` and ``B = Ub diag(Sb, 0) Vb*`` we take
    ``U = Ua``, ``V = Ub``; the row blocks come from the cross products
    ``Va* Ub`` and ``Vb* Ua``, whose leading rows are orthonormal.
    """
    A, B = _square_pair(A, B)
    sa, sb = svd(A, cfg), svd(B, cfg)
    r, s = sa.rank(cfg), sb.rank(cfg)
    if r == 0:
        raise ZeroMatrix("A has rank 0")
    if s == 0:
        raise ZeroMatrix("B has rank 0")
    U, V = sa.U, sb.U
    row_a = ctranspose(sa.V[:, :r]) @ V
    row_b = ctranspose(sb.V[:, :s]) @ U
    return PairSvdDecomposition(
        U=U,
        V=V,
        Sigma_A=np.diag(sa.singular_values[:r]).astype(np.complex128),
        Sigma_B=np.diag(sb.singular_values[:s]).astype(np.complex128),
        A1=row_a[:, :s],
        A2=row_a[:, s:],
        B1=row_b[:, :r],
        B2=row_b[:, r:],
        r=r,
        s=s,
    )


@dataclass(frozen=True)
class CoreEpPairDecomposition:
    """``A = U [A1, A12; 0, A2] V*`` and ``B = V [B1, B12; 0, B2] U*``.

    A1 and B1 are invertible t x t blocks; A2 B2 and B2 A2 are nilpotent.
    ``lower_residuals`` records the Frobenius norms of the (2,1) blocks of
    ``U* A V`` and ``V* B U``, which vanish in exact arithmetic.
    """

    U: np.ndarray
    V: np.ndarray
    A1: np.ndarray
    A12: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B12: np.ndarray
    B2: np.ndarray
    t: int
    k: int
    index_ab: int
    index_ba: int
    lower_residuals: tuple[float, float] = (0.0, 0.0)

    def reconstruct_a(self) -> np.ndarray:
        m, t = self.U.shape[0], self.t
        M = np.block([[self.A1, self.A12], [_zeros(m - t, t), self.A2]])
        return self.U @ M @ ctranspose(self.V)

    def reconstruct_b(self) -> np.ndarray:
        n, t = self.V.shape[0], self.t
        M = np.block([[self.B1, self.B12], [_zeros(n - t, t), self.B2]])
        return self.V @ M @ ctranspose(self.U)


def core_ep_pair_decomposition(A, B, cfg: ToleranceConfig | None = None) -> CoreEpPairDecomposition:
    """Core-EP decomposition of the pair (A, B), A m x n and B n x m.

    The leading frames span R((AB)^k) and R((BA)^k), k = max(Ind(AB), Ind(BA));
    A maps the second onto the first and B the first onto the second, which
    makes both factorizations block upper triangular.
    """
    cfg = _cfg(cfg)
    A, B = as_matrix(A), as_matrix(B)
    m, n = A.shape
    if B.shape != (n, m):
        raise DimensionMismatch(f"B must be {n} x {m} for A of shape {A.shape}, got {B.shape}")
    if not np.any(B):
        raise ZeroMatrix("B is the zero matrix")
    AB, BA = A @ B, B @ A
    index_ab = matrix_index(AB, cfg).index
    index_ba = matrix_index(BA, cfg).index
    k = max(index_ab, index_ba)
    U1 = range_basis(mpow(AB, k), cfg, scale=norm2(AB) ** k)
    V1 = range_basis(mpow(BA, k), cfg, scale=norm2(BA) ** k)
    if U1.dim == 0:
        raise NilpotentProduct("AB is nilpotent: (AB)^k has rank 0")
    if U1.dim != V1.dim:
        raise PreconditionError(
            f"rank((AB)^k) = {U1.dim} differs from rank((BA)^k) = {V1.dim}; "
            "index detection is unreliable for this input"
        )
    t = U1.dim
    U = np.hstack([U1.basis, complement_basis(U1, cfg).basis])
    V = np.hstack([V1.basis, complement_basis(V1, cfg).basis])
    Ah = ctranspose(U) @ A @ V
    Bh = ctranspose(V) @ B @ U
    lower = (fro(Ah[t:, :t]), fro(Bh[t:, :t]))
    A1, B1 = Ah[:t, :t], Bh[:t, :t]
    for name, block in (("A1", A1), ("B1", B1)):
        s = np.linalg.svd(block, compute_uv=False)
        if s[-1] <= rank_cutoff(s, t, t, cfg, scale=max(norm2(A), norm2(B))):
            raise SingularLeadingBlock(f"{name} is numerically singular (sigma_min={s[-1]:.3e})")
    return CoreEpPairDecomposition(
        U=U,
        V=V,
        A1=A1,
        A12=Ah[:t, t:],
        A2=Ah[t:, t:],
        B1=B1,
        B12=Bh[:t, t:],
        B2=Bh[t:, t:],
        t=t,
        k=k,
        index_ab=index_ab,
        index_ba=index_ba,
        lower_residuals=lower,
    )


@dataclass(frozen=True)
class BlockTriangularForm:
    """``C = U [C1, C2; 0, C3] V*`` with C1 t x t invertible.

    ``omega`` is ``(C1 C1* + C2 (I - Q_C3) C2*)^-1``, filled in on construction.
    ``scale`` is the operand magnitude used for rank decisions on the blocks
    (defaults to the largest block norm); ``c3_rank``, when known from
    elsewhere, overrides the rank decision on C3.
    """

    U: np.ndarray
    V: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    C3: np.ndarray
    cfg: ToleranceConfig | None = None
    scale: float | None = None
    c3_rank: int | None = None
    omega: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = self.C1.shape[0]
        m, n = self.U.shape[0], self.V.shape[0]
        if self.C1.shape != (t, t) or self.C2.shape != (t, n - t) or self.C3.shape != (m - t, n - t):
            raise DimensionMismatch(
                f"blocks {self.C1.shape}, {self.C2.shape}, {self.C3.shape} do not tile a {m} x {n} matrix"
            )
        if t == 0:
            raise SingularLeadingBlock("leading block is empty")
        if self.scale is None:
            scale = max(norm2(self.C1), norm2(self.C2), norm2(self.C3))
            object.__setattr__(self, "scale", scale)
        s = np.linalg.svd(self.C1, compute_uv=False)
        if s[-1] <= rank_cutoff(s, t, t, self.cfg, scale=self.scale):
            raise SingularLeadingBlock(f"C1 is numerically singular (sigma_min={s[-1]:.3e})")
        G = self.C1 @ ctranspose(self.C1) + self.C2 @ self.complement_q3() @ ctranspose(self.C2)
        object.__setattr__(self, "omega", np.linalg.inv(G))

    @property
    def t(self) -> int:
        return self.C1.shape[0]

    def c3_pinv(self) -> np.ndarray:
        if self.c3_rank is not None:
            return pinv_of_rank(self.C3, self.c3_rank)
        return pinv(self.C3, self.cfg, scale=self.scale)

    def complement_q3(self) -> np.ndarray:
        """I - C3^+ C3."""
        return eye(self.C3.shape[1]) - self.c3_pinv() @ self.C3

    def matrix(self) -> np.ndarray:
        m, t = self.U.shape[0], self.t
        M = np.block([[self.C1, self.C2], [_zeros(m - t, t), self.C3]])
        return self.U @ M @ ctranspose(self.V)


def block_pinv(form: BlockTriangularForm) -> np.ndarray:
    """Pseudoinverse of a block upper-triangular form via its blocks.

    ``V [C1* W, -C1* W C2 C3^+; (I-Q) C2* W, C3^+ - (I-Q) C2* W C2 C3^+] U*``
    with ``W = omega`` and ``Q = C3^+ C3``.
    """
    C1, C2 = form.C1, form.C2
    W = form.omega
    C3p = form.c3_pinv()
    F = form.complement_q3() @ ctranspose(C2) @ W
    C1hW = ctranspose(C1) @ W
    M = np.block([
        [C1hW, -C1hW @ C2 @ C3p],
        [F, C3p - F @ C2 @ C3p],
    ])
    return form.V @ M @ ctranspose(form.U)


def block_projector(form: BlockTriangularForm) -> np.ndarray:
    """``U diag(I_t, P_C3) U*``, the orthogonal projector onto R(C)."""
    t = form.t
    P3 = form.C3 @ form.c3_pinv()
    m = form.U.shape[0]
    M = np.block([[eye(t), _zeros(t, m - t)], [_zeros(m - t, t), P3]])
    return form.U @ M @ ctranspose(form.U)
