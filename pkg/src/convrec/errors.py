"""Exception hierarchy shared by every module of the package."""


class ConvRecError(Exception):
    """Base class for all package errors."""


class NyquistRangeError(ConvRecError, ValueError):
    """Requested frequency or order is beyond what the grid resolves."""


class GridMismatchError(ConvRecError, ValueError):
    """Operands live on grids of different sizes."""


class DegenerateInputError(ConvRecError, ValueError):
    """Input carries no usable signal (identically zero, all in dead band)."""


class UnsupportedKernelError(ConvRecError, ValueError):
    """Kernel chain falls outside the class the construction handles."""


class InconsistentInterpolationError(ConvRecError, ArithmeticError):
    """Overdetermined interpolation system is not compatible.

    Raised when the interpolation residual at the nodes exceeds its gate,
    which means either the extremal point is wrong or the kernel chain is
    not variation diminishing.
    """

    def __init__(self, message, residual=None, tolerance=None):
        super().__init__(message)
        self.residual = residual
        self.tolerance = tolerance


class PreconditionError(ConvRecError, ValueError):
    """An argument violates a documented precondition."""
