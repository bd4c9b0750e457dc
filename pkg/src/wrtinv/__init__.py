"""Generalized inverses of a matrix with respect to another, with verification tools."""

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    IndexOutOfRange,
    InputError,
    NilpotentProduct,
    NonFinite,
    NotSquare,
    ParameterMismatch,
    PreconditionError,
    RankOutOfRange,
    RankTieWarning,
    SingularLeadingBlock,
    WrtInvError,
    ZeroMatrix,
)
from .matcore import DEFAULT_TOL, ToleranceConfig, matrix_index, pinv, projectors, rank
from .geninv import Route, bt, core_ep, drazin, geninv_wrt, w_bt, w_core_ep

__all__ = [
    "ConvergenceFailure",
    "DEFAULT_TOL",
    "DimensionMismatch",
    "IndexOutOfRange",
    "InputError",
    "NilpotentProduct",
    "NonFinite",
    "NotSquare",
    "ParameterMismatch",
    "PreconditionError",
    "RankOutOfRange",
    "RankTieWarning",
    "Route",
    "SingularLeadingBlock",
    "ToleranceConfig",
    "WrtInvError",
    "ZeroMatrix",
    "bt",
    "core_ep",
    "drazin",
    "geninv_wrt",
    "matrix_index",
    "pinv",
    "projectors",
    "rank",
    "w_bt",
    "w_core_ep",
]
