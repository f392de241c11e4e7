"""Exception hierarchy shared by every module."""


class SparseChoiceError(Exception):
    """Base class for all package errors."""


class InvalidModelError(SparseChoiceError, ValueError):
    """A choice model, permutation or matrix violates its invariants."""


class DimensionError(SparseChoiceError, ValueError):
    pass


class ConvergenceError(SparseChoiceError, RuntimeError):
    """An iterative routine stopped before reaching its tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class NotDoublyStochasticError(SparseChoiceError, ValueError):
    """Raised when the positive support admits no perfect matching.

    ``rows`` and ``columns`` form a Hall witness: every positive entry in
    ``rows`` lies in ``columns`` and ``len(columns) < len(rows)`` (1-based).
    """

    def __init__(self, message, rows=(), columns=()):
        super().__init__(message)
        self.rows = tuple(rows)
        self.columns = tuple(columns)


class SizeLimitError(SparseChoiceError, ValueError):
    """Full enumeration of N! permutations was requested for too large N."""
