class HodgeRankError(Exception):
    """Base class for errors raised by this package."""


class StructuralInputError(HodgeRankError, ValueError):
    """A graph or complex violates its structural invariants."""


class DimensionError(HodgeRankError, ValueError):
    """Operand shapes do not conform."""


class NumericalBreakdown(HodgeRankError, ArithmeticError):
    """An iteration produced a non-finite value or divided by zero."""


class ConvergenceError(HodgeRankError, RuntimeError):
    """An iteration did not reach its tolerance; carries the solver report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DecompositionQualityError(HodgeRankError, RuntimeError):
    """The harmonic remainder of a decomposition failed its kernel check."""

    def __init__(self, message, norms=None):
        super().__init__(message)
        self.norms = norms or {}
