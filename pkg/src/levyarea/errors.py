"""Exception types shared across the package."""


class LevyAreaError(Exception):
    """Base class for all package errors."""


class DomainError(LevyAreaError, ValueError):
    """A parameter lies outside the domain where an operation is defined."""


class RangeError(LevyAreaError, OverflowError):
    """An argument is beyond the range this package evaluates."""


class ConvergenceError(LevyAreaError, RuntimeError):
    """An iterative procedure failed to converge or bracket a root."""


class GridError(LevyAreaError, ValueError):
    """A time grid is unsuitable for the requested simulation."""


class TruncationWarning(UserWarning):
    """A truncated series may not meet its target tolerance."""
