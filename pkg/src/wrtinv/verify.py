"""Executable checks for the characterizations of A^(B) and its relatives.

Each ``check_*`` function takes candidate matrices and returns a
:class:`VerificationReport` with one :class:`Condition` per equation or
subspace relation.  A condition passes when its residual is at most
``cfg.residual_tol * scale``; matrix identities use
``scale = max(1, largest Frobenius norm among the inputs)``, subspace
comparisons between orthonormal bases use ``scale = 1``.

Conditions are grouped.  When several systems claim to characterize the
same matrix, each system is its own group and :func:`group_agreement`
measures how often their verdicts coincide over a set of candidates.
Biconditional statements are checked as equality of the two verdicts, so
they stay meaningful when both sides are false.
"""

from __future__ import annotations

import functools
import json
import warnings
from dataclasses import dataclass, field
from typing import Iterable

from . import geninv
from .errors import DimensionMismatch, NotSquare, RankTieWarning
from .matcore import (
    ToleranceConfig,
    _cfg,
    as_matrix,
    containment_residual,
    ctranspose,
    eye,
    fro,
    matrix_index,
    norm2,
    pinv,
    power,
    product_scale,
    range_basis,
    range_projector,
    rank,
)


@dataclass(frozen=True)
class Condition:
    label: str
    group: str
    residual: float
    scale: float
    threshold: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    theorem_id: str
    conditions: tuple[Condition, ...]
    warnings: tuple[str, ...] = ()

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def groups(self) -> list[str]:
        seen = []
        for c in self.conditions:
            if c.group not in seen:
                seen.append(c.group)
        return seen

    def group(self, name: str) -> list[Condition]:
        return [c for c in self.conditions if c.group == name]

    def group_verdicts(self) -> dict[str, bool]:
        return {g: all(c.passed for c in self.group(g)) for g in self.groups}

    def condition(self, label: str) -> Condition:
        for c in self.conditions:
            if c.label == label:
                return c
        raise KeyError(label)

    def max_residual(self) -> float:
        return max((c.residual for c in self.conditions), default=0.0)

    def failing(self) -> list[Condition]:
        return [c for c in self.conditions if not c.passed]

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "conditions": [
                {
                    "label": c.label,
                    "group": c.group,
                    "residual": c.residual,
                    "scale": c.scale,
                    "threshold": c.threshold,
                    "pass": c.passed,
                    "detail": c.detail,
                }
                for c in self.conditions
            ],
            "warnings": list(self.warnings),
            "overall": self.overall,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    def to_text(self) -> str:
        lines = [f"{self.theorem_id}"]
        width = max((len(c.label) for c in self.conditions), default=0)
        gwidth = max((len(c.group) for c in self.conditions), default=0) + 2
        for c in self.conditions:
            verdict = "PASS" if c.passed else "FAIL"
            line = (
                f"  {verdict}  {f'[{c.group}]'.ljust(gwidth)} {c.label.ljust(width)}  "
                f"residual={c.residual:.3e}  threshold={c.threshold:.3e}"
            )
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        if len(self.groups) > 1:
            verdicts = ", ".join(f"{g}={'pass' if v else 'fail'}" for g, v in self.group_verdicts().items())
            lines.append(f"  groups: {verdicts}")
        lines.append(f"  overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines)


class _Builder:
    def __init__(self, theorem_id, cfg, *inputs):
        self.theorem_id = theorem_id
        self.cfg = _cfg(cfg)
        self.scale = max([1.0] + [fro(M) for M in inputs])
        self.conditions = []

    def add(self, label, group, residual, scale, detail=""):
        threshold = self.cfg.residual_tol * scale
        residual = float(residual)
        self.conditions.append(
            Condition(label, group, residual, float(scale), float(threshold), residual <= threshold, detail)
        )

    def equal(self, label, group, lhs, rhs):
        self.add(label, group, fro(lhs - rhs), self.scale)

    def contained(self, label, group, M, G, g_scale=None):
        """R(M) inside R(G)."""
        Y = range_basis(G, self.cfg, g_scale)
        self.add(label, group, containment_residual(M, Y), max(1.0, fro(M)), f"dim R(G) = {Y.dim}")

    def same_range(self, label, group, M, G, m_scale=None, g_scale=None):
        X = range_basis(M, self.cfg, m_scale)
        Y = range_basis(G, self.cfg, g_scale)
        residual = max(containment_residual(X.basis, Y), containment_residual(Y.basis, X))
        self.add(label, group, residual, 1.0, f"dims {X.dim} and {Y.dim}")

    def same_null(self, label, group, M, G, m_scale=None, g_scale=None):
        # N(M) = N(G) iff R(M*) = R(G*)
        self.same_range(label, group, ctranspose(M), ctranspose(G), m_scale, g_scale)

    def iff(self, label, group, left, right):
        (lname, lval), (rname, rval) = left, right
        self.add(label, group, 0.0 if lval == rval else 1.0, 1.0, f"{lname}: {lval}; {rname}: {rval}")

    def is_zero(self, M) -> bool:
        return fro(M) <= self.cfg.residual_tol * self.scale

    def report(self, caught=()) -> VerificationReport:
        return VerificationReport(self.theorem_id, tuple(self.conditions), tuple(caught))


def _collect_warnings(fn):
    """Record rank-tie warnings raised during a check in the report."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", RankTieWarning)
            builder = fn(*args, **kwargs)
        messages = []
        for w in caught:
            if issubclass(w.category, RankTieWarning):
                messages.append(str(w.message))
            else:
                warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
        return builder.report(tuple(dict.fromkeys(messages)))

    return wrapper


def _square(A, name="A"):
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"{name} must be square, got {A.shape}")
    return A


def _square_pair(A, B, name="B"):
    A, B = _square(A), _square(B, name)
    if A.shape != B.shape:
        raise DimensionMismatch(f"A is {A.shape} but {name} is {B.shape}")
    return A, B


def _candidate(X, shape):
    X = as_matrix(X)
    if X.shape != shape:
        raise DimensionMismatch(f"candidate must be {shape[0]} x {shape[1]}, got {X.shape}")
    return X


def _weighted(A, W):
    A, W = as_matrix(A), as_matrix(W)
    m, n = A.shape
    if W.shape != (n, m):
        raise DimensionMismatch(f"W must be {n} x {m} for A of shape {A.shape}, got {W.shape}")
    return A, W


# Moore-Penrose equations and A^(B)


@_collect_warnings
def check_penrose(A, X, cfg: ToleranceConfig | None = None):
    """The four Penrose equations, each in its own group ``A{1}`` .. ``A{4}``.

    ``report.group_verdicts()["A{1}"]`` and ``["A{2}"]`` give inner and outer
    inverse membership.
    """
    A = as_matrix(A)
    m, n = A.shape
    X = _candidate(X, (n, m))
    b = _Builder("penrose", cfg, A, X)
    AX, XA = A @ X, X @ A
    b.equal("AXA = A", "A{1}", AX @ A, A)
    b.equal("XAX = X", "A{2}", XA @ X, X)
    b.equal("(AX)* = AX", "A{3}", ctranspose(AX), AX)
    b.equal("(XA)* = XA", "A{4}", ctranspose(XA), XA)
    return b


def _wrt_parts(A, B, cfg):
    """(ABB^+, its pseudoinverse, scale of ABB^+)."""
    Bp = pinv(B, cfg)
    C = A @ B @ Bp
    scale = product_scale(A, B, Bp)
    return C, pinv(C, cfg, scale=scale), scale


@_collect_warnings
def check_geninv_wrt_spaces(A, B, X, cfg: ToleranceConfig | None = None):
    """X is the outer inverse of A with range R(BB^+A*) and null space N((AB)*)."""
    A, B = _square_pair(A, B)
    X = _candidate(X, A.shape)
    b = _Builder("spaces", cfg, A, B, X)
    Bp = pinv(B, b.cfg)
    b.same_range("R(X) = R(BB^+A*)", "spaces", X, B @ Bp @ ctranspose(A), g_scale=product_scale(B, Bp, A))
    b.same_null("N(X) = N((AB)*)", "spaces", X, ctranspose(A @ B), g_scale=product_scale(A, B))
    b.equal("XAX = X", "outer-inverse", X @ A @ X, X)
    return b


@_collect_warnings
def check_inner_inverse_criterion(A, B, cfg: ToleranceConfig | None = None):
    """A^(B) is an inner inverse of A exactly when rank(AB) = rank(A)."""
    A, B = _square_pair(A, B)
    b = _Builder("inner-inverse", cfg, A, B)
    X = geninv.geninv_wrt(A, B, b.cfg)
    inner = fro(A @ X @ A - A) <= b.cfg.residual_tol * max(b.scale, fro(X))
    equal_rank = rank(A @ B, b.cfg, scale=product_scale(A, B)) == rank(A, b.cfg)
    b.iff("A^(B) in A{1} iff rank(AB) = rank(A)", "biconditional",
          ("A^(B) in A{1}", inner), ("rank(AB) = rank(A)", equal_rank))
    return b


@_collect_warnings
def check_projector_theorem(A, B, X, cfg: ToleranceConfig | None = None):
    """AX is the orthogonal projector onto R(AB); XA projects onto R(BB^+A*) along N(B*A*A)."""
    A, B = _square_pair(A, B)
    X = _candidate(X, A.shape)
    b = _Builder("projectors", cfg, A, B, X)
    AX, XA = A @ X, X @ A
    Bp = pinv(B, b.cfg)
    b.equal("(AX)^2 = AX", "AX", AX @ AX, AX)
    b.equal("(AX)* = AX", "AX", ctranspose(AX), AX)
    b.same_range("R(AX) = R(AB)", "AX", AX, A @ B, m_scale=norm2(A) * norm2(X), g_scale=product_scale(A, B))
    b.equal("(XA)^2 = XA", "XA", XA @ XA, XA)
    b.same_range("R(XA) = R(BB^+A*)", "XA", XA, B @ Bp @ ctranspose(A),
                 m_scale=norm2(A) * norm2(X), g_scale=product_scale(B, Bp, A))
    b.same_null("N(XA) = N(B*A*A)", "XA", XA, ctranspose(B) @ ctranspose(A) @ A,
                m_scale=norm2(A) * norm2(X), g_scale=norm2(B) * norm2(A) ** 2)
    return b


@_collect_warnings
def check_row_space_system(A, B, X, cfg: ToleranceConfig | None = None):
    """XA = (ABB^+)^+ A together with R(X*) inside R(AB)."""
    A, B = _square_pair(A, B)
    X = _candidate(X, A.shape)
    b = _Builder("row-space", cfg, A, B, X)
    _, Cp, _ = _wrt_parts(A, B, b.cfg)
    b.equal("XA = (ABB^+)^+ A", "system", X @ A, Cp @ A)
    b.contained("R(X*) in R(AB)", "system", ctranspose(X), A @ B, g_scale=product_scale(A, B))
    return b


@_collect_warnings
def check_product_system(A, B, X, cfg: ToleranceConfig | None = None):
    """XAX = X, AX = P_AB and XA = B (AB)^+ A.

    The unique solution of this system is ``B pinv(AB)``, which coincides with
    A^(B) only when R(BB*A*) = R(BB^+A*) (for instance when B is an orthogonal
    projector or a multiple of a unitary).
    """
    A, B = _square_pair(A, B)
    X = _candidate(X, A.shape)
    b = _Builder("product", cfg, A, B, X)
    AB = A @ B
    ABp = pinv(AB, b.cfg, scale=product_scale(A, B))
    b.equal("XAX = X", "system", X @ A @ X, X)
    b.equal("AX = P_AB", "system", A @ X, AB @ ABp)
    b.equal("XA = B(AB)^+ A", "system", X @ A, B @ ABp @ A)
    return b


@_collect_warnings
def check_equivalent_systems(A, B, X, cfg: ToleranceConfig | None = None):
    """Three statements that each pin down A^(B), one group apiece.

    ``closed-form``: X = (ABB^+)^+.  ``three-equation``: XAX = X,
    AX = A(ABB^+)^+, XA = (ABB^+)^+ A.  ``range``: AX = P_AB and
    R(X) inside R(BB^+A*).
    """
    A, B = _square_pair(A, B)
    X = _candidate(X, A.shape)
    b = _Builder("equivalence", cfg, A, B, X)
    C, Cp, _ = _wrt_parts(A, B, b.cfg)
    Bp = pinv(B, b.cfg)
    b.equal("X = (ABB^+)^+", "closed-form", X, Cp)
    b.equal("XAX = X", "three-equation", X @ A @ X, X)
    b.equal("AX = A(ABB^+)^+", "three-equation", A @ X, A @ Cp)
    b.equal("XA = (ABB^+)^+ A", "three-equation", X @ A, Cp @ A)
    b.equal("AX = P_AB", "range", A @ X, C @ Cp)
    b.contained("R(X) in R(BB^+A*)", "range", X, B @ Bp @ ctranspose(A), g_scale=product_scale(B, Bp, A))
    return b


@_collect_warnings
def check_basic_properties(A, B, cfg: ToleranceConfig | None = None):
    """Identities and biconditionals satisfied by A^(B) for every square pair."""
    A, B = _square_pair(A, B)
    b = _Builder("properties", cfg, A, B)
    cfg = b.cfg
    n = A.shape[0]
    wrt = functools.partial(geninv.geninv_wrt, cfg=cfg)
    X = wrt(A, B)
    C, _, c_scale = _wrt_parts(A, B, cfg)
    Ap, Bp = pinv(A, cfg), pinv(B, cfg)
    Xp = pinv(X, cfg, scale=norm2(X))

    b.iff("A^(B) = 0 iff AB = 0", "zero", ("A^(B) = 0", b.is_zero(X)), ("AB = 0", b.is_zero(A @ B)))
    b.equal("(A^(B))^+ = ABB^+", "pinv", Xp, C)
    b.equal("BB^+ A^(B) = A^(B)", "range", B @ Bp @ X, X)
    b.equal("A^(I) = A^+", "identity", wrt(A, eye(n)), Ap)
    b.equal("A^(A^+) = A^+", "identity", wrt(A, Ap), Ap)
    b.equal("A^(A^(B)) = A^(B)", "idempotent", wrt(A, X), X)
    b.equal("(A^(B))^((A^(B))^+) = (A^(B))^+", "pinv-weight", wrt(X, Xp), Xp)

    Y = wrt(B, A)
    Yp = pinv(Y, cfg, scale=norm2(Y))
    commute = b.is_zero(A @ B - B @ A)
    swapped = b.is_zero(Xp @ B - Yp @ A)
    b.iff("AB = BA iff (A^(B))^+ B = (B^(A))^+ A", "commuting",
          ("AB = BA", commute), ("(A^(B))^+ B = (B^(A))^+ A", swapped))
    b.iff("A^(B) = A^+ iff ABB^+ = A", "pinv-case",
          ("A^(B) = A^+", b.is_zero(X - Ap)), ("ABB^+ = A", b.is_zero(C - A)))
    return b


# Drazin, core-EP, BT


@_collect_warnings
def check_drazin(A, X, cfg: ToleranceConfig | None = None):
    """XAX = X, AX = XA, XA^(k+1) = A^k with k = Ind(A)."""
    A = _square(A)
    X = _candidate(X, A.shape)
    b = _Builder("drazin", cfg, A, X)
    k = matrix_index(A, b.cfg).index
    b.equal("XAX = X", "system", X @ A @ X, X)
    b.equal("AX = XA", "system", A @ X, X @ A)
    b.equal(f"XA^(k+1) = A^k, k={k}", "system", X @ power(A, k + 1, b.cfg), power(A, k, b.cfg))
    return b


@_collect_warnings
def check_core_ep(A, X, cfg: ToleranceConfig | None = None):
    """Core-EP systems: the defining one and the one built on A^D.

    ``definition``: XAX = X, (AX)* = AX, XA^(k+1) = A^k.
    ``drazin``: XAX = X, AX = AA^D (AA^D)^+, XA = A^D (AA^D)^+ A.
    """
    A = _square(A)
    X = _candidate(X, A.shape)
    b = _Builder("core-ep", cfg, A, X)
    k = matrix_index(A, b.cfg).index
    AX = A @ X
    b.equal("XAX = X", "definition", X @ AX, X)
    b.equal("(AX)* = AX", "definition", ctranspose(AX), AX)
    b.equal(f"XA^(k+1) = A^k, k={k}", "definition", X @ power(A, k + 1, b.cfg), power(A, k, b.cfg))

    D = geninv.drazin(A, b.cfg)
    AD = A @ D
    G = D @ pinv(AD, b.cfg, scale=product_scale(A, D))
    b.equal("XAX = X", "drazin", X @ AX, X)
    b.equal("AX = AA^D (AA^D)^+", "drazin", AX, A @ G)
    b.equal("XA = A^D (AA^D)^+ A", "drazin", X @ A, G @ A)
    return b


@_collect_warnings
def check_bt(A, X, cfg: ToleranceConfig | None = None):
    """XAX = X, AX = P_(A^2), XA = A (A^2)^+ A.

    The unique solution is ``A pinv(A^2)``, which differs from the BT inverse
    ``pinv(A P_A)`` unless R(AA*A*) = R(P_A A*).
    """
    A = _square(A)
    X = _candidate(X, A.shape)
    b = _Builder("bt", cfg, A, X)
    A2 = A @ A
    A2p = pinv(A2, b.cfg, scale=norm2(A) ** 2)
    b.equal("XAX = X", "system", X @ A @ X, X)
    b.equal("AX = P_(A^2)", "system", A @ X, A2 @ A2p)
    b.equal("XA = A(A^2)^+ A", "system", X @ A, A @ A2p @ A)
    return b


# Weighted inverses


def _outer_inverse_conditions(b, group, M, X, range_gen, null_gen, r_scale, n_scale, names):
    range_name, null_name = names
    b.equal("XWAWX = X", group, X @ M @ X, X)
    b.same_range(f"R(X) = R({range_name})", group, X, range_gen, g_scale=r_scale)
    b.same_null(f"N(X) = N({null_name})", group, X, null_gen, g_scale=n_scale)


@_collect_warnings
def check_w_core_ep(A, W, X, cfg: ToleranceConfig | None = None, include_alternates: bool = False):
    """Systems characterizing the W-weighted core-EP inverse (A m x n, W n x m).

    With M = WAW, k = Ind(AW), P = P_((AW)^k) and G = (MP)^+:

    ``definition``: MX = P_((WA)^k') and R(X) inside R((AW)^k'), where
    k' = max(Ind(AW), Ind(WA)).
    ``outer-inverse``: XMX = X, R(X) = R(P M*), N(X) = N((M (AW)^k)*).
    ``right-action``: XM = GM and R(X*) inside R(W (AW)^(k+1)).
    ``three-equation``: XMX = X, MX = MG, XM = GM.
    ``projector``: MX = P_(W (AW)^(k+1)) and R(X) inside R(P M*).

    ``include_alternates`` adds groups with competing readings of two of
    these statements (square inputs only): ``outer-inverse/alt`` uses the
    null space N(M ((AW)^k)*), ``three-equation/alt`` uses XM = XG.
    """
    A, W = _weighted(A, W)
    m, n = A.shape
    X = _candidate(X, (m, n))
    b = _Builder("w-core-ep", cfg, A, W, X)
    cfg = b.cfg
    AW, WA = A @ W, W @ A
    M = W @ AW
    m_scale = product_scale(W, A, W)
    aw = norm2(AW)

    kk = max(matrix_index(AW, cfg).index, matrix_index(WA, cfg).index)
    WAk = power(WA, kk, cfg)
    b.equal("WAWX = P_((WA)^k)", "definition", M @ X, range_projector(WAk, cfg, scale=norm2(WA) ** kk))
    b.contained("R(X) in R((AW)^k)", "definition", X, power(AW, kk, cfg), g_scale=aw**kk)

    k = matrix_index(AW, cfg).index
    AWk = power(AW, k, cfg)
    P = range_projector(AWk, cfg, scale=aw**k)
    G = pinv(M @ P, cfg, scale=m_scale)
    PMh = P @ ctranspose(M)
    nul = ctranspose(M @ AWk)
    _outer_inverse_conditions(b, "outer-inverse", M, X, PMh, nul, m_scale, m_scale * aw**k,
                              ("P WAW*", "(WAW(AW)^k)*"))

    Wk1 = W @ power(AW, k + 1, cfg)
    wk1_scale = norm2(W) * aw ** (k + 1)
    b.equal("XWAW = (WAWP)^+ WAW", "right-action", X @ M, G @ M)
    b.contained("R(X*) in R(W(AW)^(k+1))", "right-action", ctranspose(X), Wk1, g_scale=wk1_scale)

    b.equal("XWAWX = X", "three-equation", X @ M @ X, X)
    b.equal("WAWX = WAW(WAWP)^+", "three-equation", M @ X, M @ G)
    b.equal("XWAW = (WAWP)^+ WAW", "three-equation", X @ M, G @ M)

    b.equal("WAWX = P_(W(AW)^(k+1))", "projector", M @ X, range_projector(Wk1, cfg, scale=wk1_scale))
    b.contained("R(X) in R(P WAW*)", "projector", X, PMh, g_scale=m_scale)

    if include_alternates and m == n:
        alt_nul = M @ ctranspose(AWk)
        _outer_inverse_conditions(b, "outer-inverse/alt", M, X, PMh, alt_nul, m_scale, m_scale * aw**k,
                                  ("P WAW*", "WAW((AW)^k)*"))
        b.equal("XWAWX = X", "three-equation/alt", X @ M @ X, X)
        b.equal("WAWX = WAW(WAWP)^+", "three-equation/alt", M @ X, M @ G)
        b.equal("XWAW = X(WAWP)^+", "three-equation/alt", X @ M, X @ G)
    return b


@_collect_warnings
def check_w_bt(A, W, X, cfg: ToleranceConfig | None = None, include_alternates: bool = False):
    """Systems characterizing the W-weighted BT inverse (A m x n, W n x m).

    With M = WAW, P = P_AW and G = (MP)^+:

    ``definition``: AWX = AW G and R(X) inside R(P M*).
    ``outer-inverse``: XMX = X, R(X) = R(P M*), N(X) = N((W (AW)^2)*).
    ``right-action``: XM = GM and R(X*) inside R(W (AW)^2).
    ``three-equation``: XMX = X, MX = MG, XM = GM.
    ``projector``: MX = P_(W (AW)^2) and R(X) inside R(P M*).
    ``product-form``: XMX = X, MX = P_(W (AW)^2), XM = AW (W (AW)^2)^+ M.

    ``include_alternates`` adds competing readings (square inputs only):
    ``outer-inverse/alt`` with N((W* (AW)^2)*), ``right-action/alt`` with
    XM = GA, ``three-equation/alt`` with XM = XG and ``product-form/alt``
    with MX = X P_(W (AW)^2).
    """
    A, W = _weighted(A, W)
    m, n = A.shape
    X = _candidate(X, (m, n))
    b = _Builder("w-bt", cfg, A, W, X)
    cfg = b.cfg
    AW = A @ W
    M = W @ AW
    m_scale = product_scale(W, A, W)
    aw = norm2(AW)
    P = range_projector(AW, cfg, scale=product_scale(A, W))
    G = pinv(M @ P, cfg, scale=m_scale)
    PMh = P @ ctranspose(M)
    W2 = W @ AW @ AW
    w2_scale = norm2(W) * aw**2
    P_W2 = range_projector(W2, cfg, scale=w2_scale)

    b.equal("AWX = AW(WAWP_AW)^+", "definition", AW @ X, AW @ G)
    b.contained("R(X) in R(P_AW WAW*)", "definition", X, PMh, g_scale=m_scale)

    _outer_inverse_conditions(b, "outer-inverse", M, X, PMh, ctranspose(W2), m_scale, w2_scale,
                              ("P_AW WAW*", "(W(AW)^2)*"))

    b.equal("XWAW = (WAWP_AW)^+ WAW", "right-action", X @ M, G @ M)
    b.contained("R(X*) in R(W(AW)^2)", "right-action", ctranspose(X), W2, g_scale=w2_scale)

    b.equal("XWAWX = X", "three-equation", X @ M @ X, X)
    b.equal("WAWX = WAW(WAWP_AW)^+", "three-equation", M @ X, M @ G)
    b.equal("XWAW = (WAWP_AW)^+ WAW", "three-equation", X @ M, G @ M)

    b.equal("WAWX = P_(W(AW)^2)", "projector", M @ X, P_W2)
    b.contained("R(X) in R(P_AW WAW*)", "projector", X, PMh, g_scale=m_scale)

    W2p = pinv(W2, cfg, scale=w2_scale)
    b.equal("XWAWX = X", "product-form", X @ M @ X, X)
    b.equal("WAWX = P_(W(AW)^2)", "product-form", M @ X, P_W2)
    b.equal("XWAW = AW(W(AW)^2)^+ WAW", "product-form", X @ M, AW @ W2p @ M)

    if include_alternates and m == n:
        alt_nul = ctranspose(ctranspose(W) @ AW @ AW)
        _outer_inverse_conditions(b, "outer-inverse/alt", M, X, PMh, alt_nul, m_scale, w2_scale,
                                  ("P_AW WAW*", "(W*(AW)^2)*"))
        b.equal("XWAW = (WAWP_AW)^+ A", "right-action/alt", X @ M, G @ A)
        b.contained("R(X*) in R(W(AW)^2)", "right-action/alt", ctranspose(X), W2, g_scale=w2_scale)
        b.equal("XWAWX = X", "three-equation/alt", X @ M @ X, X)
        b.equal("WAWX = WAW(WAWP_AW)^+", "three-equation/alt", M @ X, M @ G)
        b.equal("XWAW = X(WAWP_AW)^+", "three-equation/alt", X @ M, X @ G)
        b.equal("XWAWX = X", "product-form/alt", X @ M @ X, X)
        b.equal("WAWX = X P_(W(AW)^2)", "product-form/alt", M @ X, X @ P_W2)
        b.equal("XWAW = AW(W(AW)^2)^+ WAW", "product-form/alt", X @ M, AW @ W2p @ M)
    return b


# Agreement between groups


@dataclass(frozen=True)
class Disagreement:
    instance: str
    verdicts: dict[str, bool]


@dataclass(frozen=True)
class AgreementSummary:
    total: int
    agreeing: int
    group_passes: dict[str, int]
    disagreements: tuple[Disagreement, ...] = field(default=())

    @property
    def rate(self) -> float:
        return self.agreeing / self.total if self.total else 1.0

    def to_text(self) -> str:
        lines = [f"verdict agreement {self.agreeing}/{self.total} ({100 * self.rate:.1f}%)"]
        for g, count in self.group_passes.items():
            lines.append(f"  {g}: passed on {count}/{self.total}")
        for d in self.disagreements:
            verdicts = ", ".join(f"{g}={'pass' if v else 'fail'}" for g, v in d.verdicts.items())
            lines.append(f"  disagreement at {d.instance}: {verdicts}")
        return "\n".join(lines)


def group_agreement(reports: Iterable[tuple[str, VerificationReport]],
                    groups: Iterable[str] | None = None) -> AgreementSummary:
    """Count candidates on which the selected groups return the same verdict.

    ``reports`` pairs an instance label (which should carry the seed) with a
    report; ``groups`` restricts the comparison, defaulting to every group in
    each report.
    """
    wanted = list(groups) if groups is not None else None
    total = agreeing = 0
    passes: dict[str, int] = {}
    bad = []
    for label, report in reports:
        verdicts = report.group_verdicts()
        if wanted is not None:
            verdicts = {g: verdicts[g] for g in wanted if g in verdicts}
        total += 1
        for g, v in verdicts.items():
            passes[g] = passes.get(g, 0) + int(v)
        if len(set(verdicts.values())) <= 1:
            agreeing += 1
        else:
            bad.append(Disagreement(label, verdicts))
    return AgreementSummary(total, agreeing, passes, tuple(bad))


CHECKS = {
    "penrose": check_penrose,
    "spaces": check_geninv_wrt_spaces,
    "projectors": check_projector_theorem,
    "row-space": check_row_space_system,
    "product": check_product_system,
    "equivalence": check_equivalent_systems,
    "drazin": check_drazin,
    "core-ep": check_core_ep,
    "bt": check_bt,
    "w-core-ep": check_w_core_ep,
    "w-bt": check_w_bt,
}
"""Checks taking a candidate X, keyed by the name used on the command line."""
