"""Exception types shared across the package."""


class ForecastError(Exception):
    """Base class for all errors raised by hybridcast."""


class InvalidArgumentError(ForecastError, ValueError):
    """An argument violates an operation's preconditions."""


class DegenerateInputError(ForecastError, ValueError):
    """The data carries no usable variation (constant series, zero mean, ...)."""


class CorruptStructureError(ForecastError, ValueError):
    """An internal structure is inconsistent with its own invariants."""


class SingularMatrixError(ForecastError, ArithmeticError):
    """A linear system is singular to working precision."""


class ModelFitError(ForecastError):
    """A component model could not be fitted.

    ``component`` names the failing model so that callers combining several
    models can report which one broke.
    """

    def __init__(self, component, message):
        super().__init__(f"{component}: {message}")
        self.component = component
