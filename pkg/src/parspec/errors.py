"""Exception hierarchy shared by every parspec module."""


class ParspecError(Exception):
    """Base class for all errors raised by parspec."""


class AmbiguousBoundary(ParspecError, ValueError):
    """Parameter lies within the dead-band of the circle |a - 1/4| = 1/4."""


class DegreeOverflow(ParspecError, OverflowError):
    """A polynomial result would exceed the configured degree cap."""


class OffCircleParameter(ParspecError, ValueError):
    """Parameter is required to lie on the circle |a - 1/4| = 1/4 but does not."""


class DomainError(ParspecError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class NoContraction(ParspecError, ArithmeticError):
    """A one-step bound failed to contract.

    The partially built trace is attached as ``trace`` so callers can report it.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class PoleAtOne(ParspecError, ZeroDivisionError):
    """``h(z) = z + 1 + 1/(z - 1)`` evaluated at its pole."""


class VariantMismatch(ParspecError, ValueError):
    """Requested spectral-curve variant contradicts the parameter class."""


class NonConvergence(ParspecError, ArithmeticError):
    """A dense eigen or singular value solver failed to converge."""


class WorkBudgetExceeded(ParspecError, RuntimeError):
    """A grid computation would exceed the configured work budget."""


class DimensionMismatch(ParspecError, ValueError):
    """Matrix operands do not conform."""
