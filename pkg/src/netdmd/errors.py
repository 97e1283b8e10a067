"""Exception types shared across the package."""


class NetdmdError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteEntry(NetdmdError):
    """A matrix contains NaN or infinite entries."""


class AllZeroMatrix(NetdmdError):
    """A relative truncation rule was applied to an all-zero matrix."""


class NotSquare(NetdmdError):
    """An eigendecomposition was requested for a non-square matrix."""


class ConvergenceFailure(NetdmdError):
    """The eigenvalue iteration exhausted its budget (pathological input)."""


class DimensionMismatch(NetdmdError):
    """Operand shapes are inconsistent."""


class UnknownVertex(NetdmdError):
    """A vertex id does not belong to the topology."""


class RowRangeMismatch(NetdmdError):
    """Trajectory row ranges do not cover the topology's vertices."""


class EmptyNetwork(NetdmdError):
    """An operation requires at least one state vertex."""


class BadConfig(NetdmdError):
    """A configuration value violates its documented constraints."""
