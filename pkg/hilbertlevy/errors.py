"""Exceptions raised by the hilbertlevy package."""


class HilbertLevyError(Exception):
    """Base class for all hilbertlevy errors."""


class LayoutMismatchError(HilbertLevyError, ValueError):
    """Operands live on different truncated spaces."""


class DomainError(HilbertLevyError, ValueError):
    """An argument lies outside the domain of an operation."""


class SupportError(HilbertLevyError, ValueError):
    """A Lévy density was evaluated outside of its support."""


class ConsistencyError(HilbertLevyError):
    """An internal invariant does not hold."""


class NotIntegrableError(HilbertLevyError):
    """The process does not have the requested first moment.

    Parameters
    ----------
    message : `str`
        Human readable explanation.
    report : `hilbertlevy.subordination.IntegrabilityReport`, optional
        The classification that led to the rejection.

    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotSquareIntegrableError(NotIntegrableError):
    """The process does not have the requested second moment."""


class QuadratureConvergenceError(HilbertLevyError):
    """Successive quadrature refinements disagree beyond tolerance."""


class ConfigError(HilbertLevyError, ValueError):
    """An experiment configuration could not be parsed or validated."""
