"""Exception hierarchy shared by every qbound module."""


class QBoundError(Exception):
    """Base class for all errors raised by qbound."""


class ShapeError(QBoundError, ValueError):
    """Operand dimensions are inconsistent."""


class DomainError(QBoundError, ValueError):
    """Argument outside the domain of the operation (e.g. inverse of zero)."""


class DegreeError(QBoundError, ValueError):
    """Polynomial degree is below the floor required by a formula."""


class ParameterError(QBoundError, ValueError):
    """Invalid generator or configuration parameter."""


class UnsupportedPowerError(QBoundError, ValueError):
    """Requested companion power is not 2 or 3."""


class MonicityError(QBoundError, ValueError):
    """An explicit leading coefficient was supplied and is not the identity."""


class ParseError(QBoundError, ValueError):
    """Malformed polynomial or config file."""


class NumericalError(QBoundError, ArithmeticError):
    """A quantity that must be nonnegative came out clearly negative."""


class NumericalConsistencyError(NumericalError):
    """Adjoint eigenvalues could not be matched into conjugate pairs."""


class ConvergenceError(QBoundError, ArithmeticError):
    """Iterative solver hit its iteration cap.

    ``partial`` carries whatever the solver had computed when it gave up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
