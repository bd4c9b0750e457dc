"""Dense complex matrix primitives.

Every rank decision in the package goes through :func:`rank_cutoff`, so the
tolerance policy lives in exactly one place.  Functions here accept
zero-sized arrays (degenerate blocks of a decomposition are routinely empty);
user-facing entry points elsewhere validate with :func:`as_matrix`, which
rejects them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    InputError,
    NonFinite,
    NotSquare,
    RankTieWarning,
)

EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class ToleranceConfig:
    """Rank cutoff and residual thresholds.

    The effective rank cutoff of ``M`` is
    ``rank_tol_factor * max(m, n) * eps * sigma_max(M)``.
    """

    rank_tol_factor: float = 4.0
    residual_tol: float = 1e-9
    zero_eig_tol_factor: float = 4.0

    def __post_init__(self):
        for name in ("rank_tol_factor", "residual_tol", "zero_eig_tol_factor"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InputError(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOL = ToleranceConfig()


def _cfg(cfg):
    return DEFAULT_TOL if cfg is None else cfg


def _coerce(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2:
        raise InputError(f"expected a 2-D matrix, got shape {M.shape}")
    M = M.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(M)):
        raise NonFinite("matrix contains NaN or Inf entries")
    return M


def as_matrix(M, allow_empty: bool = False) -> np.ndarray:
    """Validate ``M`` and return it as a 2-D complex128 array.

    Real input is embedded with zero imaginary part.  Empty matrices are
    rejected unless ``allow_empty`` is set.
    """
    M = _coerce(M)
    if not allow_empty and M.size == 0:
        raise InputError(f"empty matrix of shape {M.shape}")
    return M


def ctranspose(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def fro(M) -> float:
    return float(np.linalg.norm(M)) if np.size(M) else 0.0


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def mpow(A: np.ndarray, k: int) -> np.ndarray:
    """A**k by repeated multiplication, with A**0 = I."""
    A = _coerce(A)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"matrix power needs a square matrix, got {A.shape}")
    if k < 0:
        raise InputError("negative matrix power")
    P = eye(A.shape[0])
    for _ in range(k):
        P = P @ A
    return P


@dataclass(frozen=True)
class SvdResult:
    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    def cutoff(self, cfg: ToleranceConfig | None = None, scale: float | None = None) -> float:
        m, n = self.U.shape[0], self.V.shape[0]
        return rank_cutoff(self.singular_values, m, n, cfg, scale)

    def rank(self, cfg: ToleranceConfig | None = None, scale: float | None = None) -> int:
        tau = self.cutoff(cfg, scale)
        return int(np.count_nonzero(self.singular_values > tau))


def rank_cutoff(singular_values, m: int, n: int, cfg: ToleranceConfig | None = None,
                scale: float | None = None) -> float:
    """Singular values at or below this count as zero.

    ``scale`` is the magnitude of the operands ``M`` was computed from (for a
    product, the product of their spectral norms).  A product that vanishes in
    exact arithmetic carries roundoff of that size, so the cutoff uses
    ``max(sigma_max(M), scale)``.
    """
    cfg = _cfg(cfg)
    smax = float(singular_values[0]) if len(singular_values) else 0.0
    if scale is not None:
        smax = max(smax, float(scale))
    return cfg.rank_tol_factor * max(m, n) * EPS * smax


def norm2(M) -> float:
    """Spectral norm (0 for empty matrices)."""
    return float(np.linalg.norm(M, 2)) if np.size(M) else 0.0


def product_scale(*mats) -> float:
    out = 1.0
    for M in mats:
        out *= norm2(M)
    return out


def svd(M, cfg: ToleranceConfig | None = None) -> SvdResult:
    """Full SVD ``M = U diag(s) V*`` with nonincreasing singular values."""
    M = _coerce(M)
    m, n = M.shape
    if M.size == 0:
        return SvdResult(eye(m), np.zeros(0), eye(n))
    try:
        U, s, Vh = np.linalg.svd(M, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return SvdResult(U, s, ctranspose(Vh))


def _warn_ties(s: np.ndarray, tau: float) -> None:
    if tau <= 0:
        return
    close = np.abs(s - tau) <= 0.1 * tau
    if np.any(close):
        warnings.warn(
            f"singular value(s) {s[close].tolist()} within 10% of rank cutoff {tau:.3e}",
            RankTieWarning,
            stacklevel=3,
        )


def rank(M, cfg: ToleranceConfig | None = None, scale: float | None = None) -> int:
    res = svd(M, cfg)
    tau = res.cutoff(cfg, scale)
    _warn_ties(res.singular_values, tau)
    return int(np.count_nonzero(res.singular_values > tau))


def pinv(M, cfg: ToleranceConfig | None = None, scale: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse; singular values at or below the cutoff count as zero."""
    M = _coerce(M)
    m, n = M.shape
    if M.size == 0:
        return np.zeros((n, m), dtype=np.complex128)
    res = svd(M, cfg)
    s = res.singular_values
    tau = res.cutoff(cfg, scale)
    _warn_ties(s, tau)
    r = int(np.count_nonzero(s > tau))
    U1 = res.U[:, :r]
    V1 = res.V[:, :r]
    return (V1 / s[:r]) @ ctranspose(U1)


def projectors(A, cfg: ToleranceConfig | None = None,
               scale: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A A^+, A^+ A)``."""
    A = _coerce(A)
    Ap = pinv(A, cfg, scale)
    return A @ Ap, Ap @ A


def range_projector(A, cfg: ToleranceConfig | None = None, scale: float | None = None) -> np.ndarray:
    """Orthogonal projector onto R(A), i.e. A A^+."""
    Y = range_basis(A, cfg, scale).basis
    return Y @ ctranspose(Y)


@dataclass(frozen=True)
class IndexResult:
    index: int
    rank_sequence: list[int]


def matrix_index(A, cfg: ToleranceConfig | None = None) -> IndexResult:
    """Smallest k >= 0 with rank(A^(k+1)) == rank(A^k).

    Returns the rank sequence rank(A^0), ..., rank(A^(k+1)).
    """
    A = _coerce(A)
    n = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"index needs a square matrix, got {A.shape}")
    ranks = [n]
    P = eye(n)
    a = norm2(A)
    for j in range(1, n + 2):
        P = P @ A
        ranks.append(rank(P, cfg, scale=a**j))
        if ranks[-1] == ranks[-2]:
            return IndexResult(len(ranks) - 2, ranks)
    raise ConvergenceFailure(f"rank sequence did not stabilize: {ranks}")


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis (columns of ``basis``) of a subspace of C^ambient_dim.

    The zero subspace is an ``ambient_dim x 0`` basis.
    """

    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_empty(self) -> bool:
        return self.dim == 0

    def projector(self) -> np.ndarray:
        return self.basis @ ctranspose(self.basis)


def range_basis(M, cfg: ToleranceConfig | None = None, scale: float | None = None) -> SubspaceBasis:
    M = _coerce(M)
    res = svd(M, cfg)
    r = res.rank(cfg, scale)
    return SubspaceBasis(M.shape[0], res.U[:, :r].copy())


def null_basis(M, cfg: ToleranceConfig | None = None, scale: float | None = None) -> SubspaceBasis:
    M = _coerce(M)
    res = svd(M, cfg)
    r = res.rank(cfg, scale)
    return SubspaceBasis(M.shape[1], res.V[:, r:].copy())


def _check_ambient(X: SubspaceBasis, Y: SubspaceBasis) -> None:
    if X.ambient_dim != Y.ambient_dim:
        raise DimensionMismatch(
            f"subspaces live in C^{X.ambient_dim} and C^{Y.ambient_dim}"
        )


def containment_residual(M, Y: SubspaceBasis) -> float:
    """Frobenius norm of the part of the columns of ``M`` outside ``Y``."""
    M = _coerce(M)
    if M.shape[0] != Y.ambient_dim:
        raise DimensionMismatch(f"{M.shape[0]}-vectors vs subspace of C^{Y.ambient_dim}")
    if M.size == 0:
        return 0.0
    return fro(M - Y.basis @ (ctranspose(Y.basis) @ M))


def subspace_contained(X: SubspaceBasis, Y: SubspaceBasis, cfg: ToleranceConfig | None = None) -> bool:
    """True iff X is a subspace of Y, up to ``residual_tol``."""
    cfg = _cfg(cfg)
    _check_ambient(X, Y)
    if X.is_empty:
        return True
    return containment_residual(X.basis, Y) <= cfg.residual_tol * max(1.0, fro(X.basis))


def subspace_equal(X: SubspaceBasis, Y: SubspaceBasis, cfg: ToleranceConfig | None = None) -> bool:
    _check_ambient(X, Y)
    return subspace_contained(X, Y, cfg) and subspace_contained(Y, X, cfg)


def complement_basis(X: SubspaceBasis, cfg: ToleranceConfig | None = None) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement of X."""
    if X.is_empty:
        return SubspaceBasis(X.ambient_dim, eye(X.ambient_dim))
    return null_basis(ctranspose(X.basis), cfg)


def truncated(M, cfg: ToleranceConfig | None = None, scale: float | None = None) -> np.ndarray:
    """M with singular values at or below the cutoff set to zero."""
    M = _coerce(M)
    if M.size == 0:
        return M
    res = svd(M, cfg)
    r = res.rank(cfg, scale)
    return (res.U[:, :r] * res.singular_values[:r]) @ ctranspose(res.V[:, :r])


def power(A, k: int, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """A**k with roundoff below the ||A||**k scale removed.

    A power that vanishes in exact arithmetic (nilpotent parts) comes back as
    exact zeros in those directions instead of noise.
    """
    P = mpow(A, k)
    if k <= 1:
        return P
    return truncated(P, cfg, scale=norm2(A) ** k)


def pinv_of_rank(M, r: int) -> np.ndarray:
    """Pseudoinverse of the best rank-``r`` approximation of M.

    For blocks whose rank is known from a decision made on better-scaled
    matrices upstream.
    """
    M = _coerce(M)
    m, n = M.shape
    if M.size == 0 or r == 0:
        return np.zeros((n, m), dtype=np.complex128)
    res = svd(M)
    s = res.singular_values[:r]
    return (res.V[:, :r] / s) @ ctranspose(res.U[:, :r])
