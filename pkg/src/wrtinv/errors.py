"""Exception types raised across the toolkit."""


class WrtInvError(Exception):
    """Base class for every error raised by this package."""


class InputError(WrtInvError):
    """Malformed input: wrong dimensionality, empty, or unparsable."""


class NonFinite(InputError):
    pass


class ConvergenceFailure(WrtInvError):
    pass


class PreconditionError(WrtInvError):
    """A mathematical precondition of an operation does not hold."""


class NotSquare(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class ZeroMatrix(PreconditionError):
    pass


class NilpotentProduct(PreconditionError):
    pass


class SingularLeadingBlock(PreconditionError):
    pass


class RankOutOfRange(PreconditionError):
    pass


class IndexOutOfRange(PreconditionError):
    pass


class ParameterMismatch(PreconditionError):
    pass


class RankTieWarning(UserWarning):
    """A singular value sits within 10% of the rank cutoff."""
