"""Exception types raised across the package."""


class QTensorError(Exception):
    """Base class for all package errors."""


class DomainError(QTensorError, ZeroDivisionError):
    """Operation undefined for the given input (e.g. inverting zero)."""


class DimensionMismatch(QTensorError, ValueError):
    """Operand shapes are not conformable."""


class IndexOutOfRange(QTensorError, IndexError):
    """A 1-based index or multi-index lies outside its shape."""


class ConvergenceFailure(QTensorError, ArithmeticError):
    """An iterative kernel hit its sweep cap before converging."""


class NotEtaHermitian(QTensorError, ValueError):
    """Input violates the eta-Hermitian precondition beyond tolerance."""


class Inconsistent(QTensorError, ValueError):
    """A tensor equation fails its solvability conditions.

    The offending :class:`~qtensor.sylvester.SolverReport` is attached as
    ``report`` so callers can see which condition failed.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotASolution(QTensorError, ValueError):
    """A supplied pair does not satisfy the equation within tolerance."""


class FormatError(QTensorError, ValueError):
    """Malformed QTEN file or quaternion literal."""
