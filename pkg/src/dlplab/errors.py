"""Exception hierarchy shared by all modules."""


class DlplabError(Exception):
    """Base class for library errors."""


class InvalidParameterError(DlplabError, ValueError):
    """A parameter violates an operation's precondition."""


class SingularityError(DlplabError, ArithmeticError):
    """A kernel was evaluated at (or numerically on) a singular point."""


class ConvergenceFailure(DlplabError, RuntimeError):
    """Quadrature could not reach the requested tolerance.

    The best error estimate obtained is kept in ``estimate``.
    """

    def __init__(self, message, estimate=float("nan")):
        super().__init__(message)
        self.estimate = estimate


class NonUniquenessError(DlplabError, ArithmeticError):
    """A projected Galerkin system is numerically singular."""


class NotRepresentableError(DlplabError, ValueError):
    """A target value does not lie in the numerical range approximation."""
