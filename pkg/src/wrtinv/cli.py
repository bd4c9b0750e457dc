"""Command-line interface: ``wrtinv compute | decomp | verify | gen | example``.

Matrices are exchanged as JSON files
``{"rows": m, "cols": n, "data": [[[re, im], ...], ...]}``.

Exit codes: 0 success, 1 verification failure, 2 usage, I/O or parse error,
3 a mathematical precondition does not hold.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import decomp, genrand, geninv, verify
from .errors import InputError, WrtInvError
from .matcore import ToleranceConfig, as_matrix, fro, pinv

EXIT_OK, EXIT_VERIFY, EXIT_IO, EXIT_PRECONDITION = 0, 1, 2, 3


class MatrixFileError(Exception):
    """A matrix file could not be read or does not follow the format."""


def _reject_constant(name):
    raise MatrixFileError(f"non-finite number {name} in matrix file")


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def parse_matrix(text: str, source: str = "<input>") -> np.ndarray:
    """Parse a matrix document; every deviation from the format is an error."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{source}: invalid JSON: {exc}") from exc
    except MatrixFileError as exc:
        raise MatrixFileError(f"{source}: {exc}") from None
    if not isinstance(doc, dict):
        raise MatrixFileError(f"{source}: top level must be an object")
    keys = set(doc)
    if keys != {"rows", "cols", "data"}:
        extra, missing = keys - {"rows", "cols", "data"}, {"rows", "cols", "data"} - keys
        parts = []
        if extra:
            parts.append(f"unknown keys {sorted(extra)}")
        if missing:
            parts.append(f"missing keys {sorted(missing)}")
        raise MatrixFileError(f"{source}: " + ", ".join(parts))
    m, n, data = doc["rows"], doc["cols"], doc["data"]
    for name, value in (("rows", m), ("cols", n)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise MatrixFileError(f"{source}: {name} must be a positive integer, got {value!r}")
    if not isinstance(data, list) or len(data) != m:
        raise MatrixFileError(f"{source}: data must hold {m} rows")
    out = np.empty((m, n), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFileError(f"{source}: row {i} must hold {n} entries")
        for j, entry in enumerate(row):
            if not (isinstance(entry, list) and len(entry) == 2 and all(_is_number(x) for x in entry)):
                raise MatrixFileError(f"{source}: entry ({i}, {j}) must be a [re, im] pair of numbers")
            re, im = (float(x) for x in entry)
            if not (math.isfinite(re) and math.isfinite(im)):
                raise MatrixFileError(f"{source}: entry ({i}, {j}) is not finite")
            out[i, j] = complex(re, im)
    return out


def dump_matrix(M) -> str:
    """Serialize with shortest round-trip decimals, so reading back is exact."""
    M = as_matrix(M)
    data = [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return json.dumps({"rows": M.shape[0], "cols": M.shape[1], "data": data}, allow_nan=False)


def read_matrix(path: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_matrix(text, path)


def write_matrix(path: str, M) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_matrix(M) + "\n")
    except OSError as exc:
        raise MatrixFileError(f"cannot write {path}: {exc.strerror}") from exc


def format_matrix(M, digits: int = 6) -> str:
    M = np.asarray(M)
    if np.all(M.imag == 0):
        M = M.real
    M = np.where(np.abs(M) < 10.0 ** -(digits + 2), 0, M)
    return np.array2string(M, precision=digits, suppress_small=True)


def _cfg(args) -> ToleranceConfig:
    return ToleranceConfig(rank_tol_factor=args.tol_rank_factor, residual_tol=args.tol_residual)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise MatrixFileError(f"-{name} <file> is required here")
    return [read_matrix(getattr(args, name)) for name in names]


def _print_residuals(report, groups, out):
    for c in report.conditions:
        if c.group in groups:
            print(f"  ||{c.label}||_F residual = {c.residual:.3e}", file=out)


# compute

COMPUTE_KINDS = ("pinv", "drazin", "core-ep", "bt", "geninv-wrt", "w-bt", "w-core-ep")


def _compute(args) -> int:
    cfg = _cfg(args)
    kind = args.kind
    (A,) = _need(args, "A")
    route = args.route
    if route is not None and kind in ("pinv", "drazin", "bt", "w-bt"):
        raise ValueError(f"{kind} has a single route; --route does not apply")
    if kind == "pinv":
        X = pinv(A, cfg)
        report, groups = verify.check_penrose(A, X, cfg), None
    elif kind == "drazin":
        X = geninv.drazin(A, cfg)
        report, groups = verify.check_drazin(A, X, cfg), None
    elif kind == "core-ep":
        X = geninv.core_ep(A, cfg, route=route or geninv.Route.DIRECT_FORMULA)
        report, groups = verify.check_core_ep(A, X, cfg), {"definition"}
    elif kind == "bt":
        X = geninv.bt(A, cfg)
        report, groups = verify.check_equivalent_systems(A, A, X, cfg), {"three-equation", "range"}
    elif kind == "geninv-wrt":
        (B,) = _need(args, "B")
        X = geninv.geninv_wrt(A, B, cfg, route=route or geninv.Route.DEFINITION)
        report, groups = verify.check_equivalent_systems(A, B, X, cfg), {"three-equation", "range"}
    elif kind == "w-bt":
        (W,) = _need(args, "W")
        X = geninv.w_bt(A, W, cfg)
        report, groups = verify.check_w_bt(A, W, X, cfg), {"definition"}
    else:
        (W,) = _need(args, "W")
        X = geninv.w_core_ep(A, W, cfg, route=route or geninv.Route.DIRECT_FORMULA)
        report, groups = verify.check_w_core_ep(A, W, X, cfg), {"definition"}

    groups = groups or set(report.groups)
    if args.output:
        write_matrix(args.output, X)
        out = sys.stdout
    else:
        print(dump_matrix(X))
        out = sys.stderr
    print(f"{kind}: {X.shape[0]} x {X.shape[1]}, defining-system residuals:", file=out)
    _print_residuals(report, groups, out)
    return EXIT_OK


# decomp


def _write_factors(directory, factors):
    os.makedirs(directory, exist_ok=True)
    written = []
    for name, M in factors.items():
        if M.size == 0:
            continue
        write_matrix(os.path.join(directory, f"{name}.json"), M)
        written.append(name)
    return written


def _rel(residual, M):
    return residual / max(1.0, fro(M))


def _decomp(args) -> int:
    cfg = _cfg(args)
    A, B = _need(args, "A", "B")
    if args.which == "pair-svd":
        d = decomp.pair_svd_decomposition(A, B, cfg)
        factors = {"U": d.U, "V": d.V, "Sigma_A": d.Sigma_A, "Sigma_B": d.Sigma_B,
                   "A1": d.A1, "A2": d.A2, "B1": d.B1, "B2": d.B2}
        I_r, I_s = np.eye(d.r), np.eye(d.s)
        lines = [
            f"pair-svd: n={d.n} r={d.r} s={d.s}",
            f"  A reconstruction (relative) = {_rel(fro(d.reconstruct_a() - A), A):.3e}",
            f"  B reconstruction (relative) = {_rel(fro(d.reconstruct_b() - B), B):.3e}",
            f"  ||A1A1* + A2A2* - I_r||_F = {fro(d.A1 @ d.A1.conj().T + d.A2 @ d.A2.conj().T - I_r):.3e}",
            f"  ||B1B1* + B2B2* - I_s||_F = {fro(d.B1 @ d.B1.conj().T + d.B2 @ d.B2.conj().T - I_s):.3e}",
        ]
    else:
        d = decomp.core_ep_pair_decomposition(A, B, cfg)
        factors = {"U": d.U, "V": d.V, "A1": d.A1, "A12": d.A12, "A2": d.A2,
                   "B1": d.B1, "B12": d.B12, "B2": d.B2}
        lines = [
            f"core-ep-pair: t={d.t} k={d.k} Ind(AB)={d.index_ab} Ind(BA)={d.index_ba}",
            f"  A reconstruction (relative) = {_rel(fro(d.reconstruct_a() - A), A):.3e}",
            f"  B reconstruction (relative) = {_rel(fro(d.reconstruct_b() - B), B):.3e}",
            f"  (2,1) blocks ||.||_F = {d.lower_residuals[0]:.3e}, {d.lower_residuals[1]:.3e}",
        ]
    if args.output:
        written = _write_factors(args.output, factors)
        lines.append(f"  wrote {', '.join(written)} to {args.output}")
    print("\n".join(lines))
    return EXIT_OK


# verify

NO_CANDIDATE = {
    "properties": verify.check_basic_properties,
    "inner-inverse": verify.check_inner_inverse_criterion,
}
NEEDS_B = {"spaces", "projectors", "row-space", "product", "equivalence", "properties", "inner-inverse"}
NEEDS_W = {"w-bt", "w-core-ep"}
THEOREMS = tuple(verify.CHECKS) + tuple(NO_CANDIDATE)


def _verify(args) -> int:
    cfg = _cfg(args)
    name = args.theorem
    (A,) = _need(args, "A")
    inputs = [A]
    if name in NEEDS_B:
        inputs += _need(args, "B")
    if name in NEEDS_W:
        inputs += _need(args, "W")
    if name in NO_CANDIDATE:
        report = NO_CANDIDATE[name](*inputs, cfg)
    else:
        (X,) = _need(args, "X")
        kwargs = {"include_alternates": True} if args.alternates and name in NEEDS_W else {}
        report = verify.CHECKS[name](*inputs, X, cfg, **kwargs)
    print(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.overall else EXIT_VERIFY


# gen


def _gen(args) -> int:
    if args.what == "rank":
        M = genrand.random_matrix_with_rank(args.rows, args.cols, args.rank, args.seed)
        write_matrix(args.output, M)
        print(f"wrote {args.rows} x {args.cols} matrix of rank {args.rank} to {args.output}")
    elif args.what == "index":
        M = genrand.random_with_index(args.n, args.index, args.seed)
        write_matrix(args.output, M)
        print(f"wrote {args.n} x {args.n} matrix of index {args.index} to {args.output}")
    elif args.what == "unitary":
        write_matrix(args.output, genrand.random_unitary(args.n, args.seed))
        print(f"wrote {args.n} x {args.n} unitary matrix to {args.output}")
    else:
        A, B = genrand.random_pair_with_core_ep_structure(args.rows, args.cols, args.t, args.index, args.seed)
        write_matrix(args.output[0], A)
        write_matrix(args.output[1], B)
        print(f"wrote A ({args.rows} x {args.cols}) to {args.output[0]} and B to {args.output[1]}")
    return EXIT_OK


# example

EXAMPLE_A = np.array([[1, 0, 0], [0, 1, 2], [0, 0, 0]], dtype=np.complex128)
EXAMPLE_B = np.diag([1, 0, 1]).astype(np.complex128)
EXAMPLE_ALTERNATIVE = np.array([[1, 0, 0], [0, 0, 0], [0, 0.5, 1]], dtype=np.complex128)


def _example(args) -> int:
    cfg = _cfg(args)
    A, B = EXAMPLE_A, EXAMPLE_B
    X = geninv.geninv_wrt(A, B, cfg)
    print("A =\n" + format_matrix(A))
    print("B =\n" + format_matrix(B))
    print("A^(B) = pinv(A B pinv(B)) =\n" + format_matrix(X))
    for route in geninv.GENINV_WRT_ROUTES[1:]:
        Y = geninv.geninv_wrt(A, B, cfg, route=route)
        print(f"  route {route.value}: ||X - A^(B)||_F = {fro(Y - X):.3e}")
    print(verify.check_product_system(A, B, X, cfg).to_text())
    print("candidate with entry (3,3) = 1 =\n" + format_matrix(EXAMPLE_ALTERNATIVE))
    bad = verify.check_product_system(A, B, EXAMPLE_ALTERNATIVE, cfg)
    print(bad.to_text())
    penrose = verify.check_penrose(A @ B @ pinv(B, cfg), EXAMPLE_ALTERNATIVE, cfg)
    print("as a pseudoinverse of ABB^+:")
    print(penrose.to_text())
    residual = bad.condition("AX = P_AB").residual
    print(f"the (3,3) = 1 candidate misses AX = P_AB by {residual:.3g}; the computed A^(B) has (3,3) = 0")
    return EXIT_OK


def _tolerance_options(defaults: bool) -> argparse.ArgumentParser:
    # subcommands repeat the flags without defaults, so a value given before
    # the subcommand is not overwritten
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    residual = ToleranceConfig.residual_tol if defaults else argparse.SUPPRESS
    factor = ToleranceConfig.rank_tol_factor if defaults else argparse.SUPPRESS
    p.add_argument("--tol-residual", type=float, default=residual,
                   help=f"relative residual threshold for checks (default {ToleranceConfig.residual_tol:g})")
    p.add_argument("--tol-rank-factor", type=float, default=factor,
                   help="multiplier in the rank cutoff factor*max(m,n)*eps*sigma_max "
                        f"(default {ToleranceConfig.rank_tol_factor:g})")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _tolerance_options(defaults=False)
    parser = argparse.ArgumentParser(prog="wrtinv", description=__doc__.splitlines()[0],
                                     parents=[_tolerance_options(defaults=True)], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], allow_abbrev=False, help="compute a generalized inverse")
    p.add_argument("kind", choices=COMPUTE_KINDS)
    p.add_argument("-A", required=True)
    p.add_argument("-B")
    p.add_argument("-W")
    p.add_argument("--route", help="route name, e.g. definition, pair-svd, core-ep-pair, product-form, "
                                   "direct, via-drazin, via-geninv-wrt, projector")
    p.add_argument("-o", "--output", help="result file (default: JSON on stdout)")
    p.set_defaults(func=_compute)

    p = sub.add_parser("decomp", parents=[common], allow_abbrev=False, help="factor a pair of matrices")
    p.add_argument("which", choices=("pair-svd", "core-ep-pair"))
    p.add_argument("-A", required=True)
    p.add_argument("-B", required=True)
    p.add_argument("-o", "--output", help="directory for the factor files")
    p.set_defaults(func=_decomp)

    p = sub.add_parser("verify", parents=[common], allow_abbrev=False, help="check a candidate against a characterization")
    p.add_argument("theorem", choices=THEOREMS)
    p.add_argument("-A", required=True)
    p.add_argument("-B")
    p.add_argument("-W")
    p.add_argument("-X")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--alternates", action="store_true",
                   help="for w-bt and w-core-ep, also evaluate the alternative readings")
    p.set_defaults(func=_verify)

    p = sub.add_parser("gen", parents=[common], allow_abbrev=False, help="write a seeded random test matrix")
    gsub = p.add_subparsers(dest="what", required=True)
    g = gsub.add_parser("rank", allow_abbrev=False)
    g.add_argument("--rows", type=int, required=True)
    g.add_argument("--cols", type=int, required=True)
    g.add_argument("--rank", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", required=True)
    g = gsub.add_parser("index", allow_abbrev=False)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--index", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", required=True)
    g = gsub.add_parser("unitary", allow_abbrev=False)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", required=True)
    g = gsub.add_parser("pair", allow_abbrev=False)
    g.add_argument("--rows", type=int, required=True)
    g.add_argument("--cols", type=int, required=True)
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--index", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", nargs=2, required=True, metavar=("A_FILE", "B_FILE"))
    p.set_defaults(func=_gen)

    p = sub.add_parser("example", parents=[common], allow_abbrev=False, help="replay the 3 x 3 worked example")
    p.add_argument("name", choices=("wrt-3x3",))
    p.set_defaults(func=_example)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (MatrixFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except WrtInvError as exc:
        print(f"precondition failed ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
