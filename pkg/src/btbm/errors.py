"""Exception types raised across the package."""


class BTBMError(Exception):
    """Base class for package errors."""


class InvalidArgumentError(BTBMError, ValueError):
    pass


class DegenerateClockError(BTBMError, ValueError):
    """The Brownian clock ``|B(t)|`` is exactly zero; the weight is undefined."""


class OnDiagonalDivergenceError(BTBMError, ValueError):
    """The density is infinite at ``x == y`` for ``d >= 2``."""


class NumericalFailureError(BTBMError, ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    The best available estimate and its error bound are attached.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class InconclusiveTestError(BTBMError):
    """A statistical check could not be run as configured."""
