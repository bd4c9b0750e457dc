"""Seeded generators for test instances with planted structure.

Every generator is a pure function of its parameters and seed: each call
builds its own ``numpy.random.Generator`` from the seed.
"""

from __future__ import annotations

import numpy as np

from .errors import IndexOutOfRange, InputError, ParameterMismatch, RankOutOfRange
from .matcore import ctranspose

SIGMA_LOW, SIGMA_HIGH = 0.5, 2.0


def _rng(seed: int) -> np.random.Generator:
    if seed < 0 or seed >= 2**64:
        raise InputError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.default_rng(seed)


def _gaussian(rng, m, n):
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)


def _unitary(rng, n):
    Q, _ = np.linalg.qr(_gaussian(rng, n, n))
    # first nonzero entry of each column made real positive
    for j in range(n):
        col = Q[:, j]
        i = int(np.flatnonzero(np.abs(col) > 0)[0])
        Q[:, j] = col * (abs(col[i]) / col[i])
    return Q


def _with_singular_values(rng, m, n, r):
    s = rng.uniform(SIGMA_LOW, SIGMA_HIGH, size=r)
    U = _unitary(rng, m)
    V = _unitary(rng, n)
    return (U[:, :r] * s) @ ctranspose(V[:, :r])


def _shift(k):
    return np.eye(k, k, 1, dtype=np.complex128)


def random_unitary(n: int, seed: int) -> np.ndarray:
    if n < 1:
        raise InputError("n must be at least 1")
    return _unitary(_rng(seed), n)


def random_matrix_with_rank(m: int, n: int, r: int, seed: int) -> np.ndarray:
    """``U diag(s, 0) V*`` with s drawn from [0.5, 2] and random unitary U, V."""
    if m < 1 or n < 1:
        raise InputError("matrix dimensions must be positive")
    if not 0 <= r <= min(m, n):
        raise RankOutOfRange(f"rank {r} outside [0, {min(m, n)}]")
    return _with_singular_values(_rng(seed), m, n, r)


def random_with_index(n: int, k: int, seed: int) -> np.ndarray:
    """Q [T, S; 0, N] Q* with T invertible and N the k x k upper shift.

    The result has index exactly ``k`` and rank ``n - 1`` when k >= 1.
    """
    if n < 1:
        raise InputError("n must be at least 1")
    if not 0 <= k <= n:
        raise IndexOutOfRange(f"index {k} outside [0, {n}]")
    rng = _rng(seed)
    t = n - k
    M = np.zeros((n, n), dtype=np.complex128)
    if t:
        M[:t, :t] = _with_singular_values(rng, t, t, t)
    M[:t, t:] = 0.5 * _gaussian(rng, t, k)
    M[t:, t:] = _shift(k)
    Q = _unitary(rng, n)
    return Q @ M @ ctranspose(Q)


def random_pair_with_core_ep_structure(m: int, n: int, t: int, k: int, seed: int):
    """A (m x n) and B (n x m) sharing a planted core-EP pair decomposition.

    ``A = U [A1, A12; 0, A2] V*`` and ``B = V [B1, B12; 0, B2] U*`` where A1, B1
    are invertible t x t blocks.  With d = min(m - t, n - t), A2 and B2 embed a
    d x d nilpotent shift of index k and the identity respectively, so that
    ``max(Ind(AB), Ind(BA)) == k`` and ``rank((AB)^k) == t``.
    """
    if t < 1 or k < 1:
        raise ParameterMismatch("t and k must both be at least 1")
    if t > min(m, n):
        raise ParameterMismatch(f"t={t} does not fit a {m} x {n} matrix")
    p, q = m - t, n - t
    d = min(p, q)
    realized = (k if d else 1) if p + q else 0
    if d and k > d:
        raise ParameterMismatch(f"index {k} exceeds nilpotent block size {d}")
    if realized != k:
        raise ParameterMismatch(
            f"blocks of size {p} x {q} realize index {realized}, not {k}"
        )
    rng = _rng(seed)
    A1 = _with_singular_values(rng, t, t, t)
    B1 = _with_singular_values(rng, t, t, t)
    A12 = 0.5 * _gaussian(rng, t, q)
    B12 = 0.5 * _gaussian(rng, t, p)
    A2 = np.zeros((p, q), dtype=np.complex128)
    B2 = np.zeros((q, p), dtype=np.complex128)
    A2[:d, :d] = _partial_shift(d, k)
    B2[:d, :d] = np.eye(d)
    U = _unitary(rng, m)
    V = _unitary(rng, n)
    A = U @ np.block([[A1, A12], [np.zeros((p, t)), A2]]) @ ctranspose(V)
    B = V @ np.block([[B1, B12], [np.zeros((q, t)), B2]]) @ ctranspose(U)
    return A, B


def _partial_shift(d, k):
    """d x d nilpotent matrix whose largest Jordan block has size k."""
    N = np.zeros((d, d), dtype=np.complex128)
    N[:k, :k] = _shift(k)
    return N
