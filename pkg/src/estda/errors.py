"""Exception types raised across the package."""


class EdaError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(EdaError, ValueError):
    """Input arrays have incompatible shapes."""


class NumericDegeneracyError(EdaError, ArithmeticError):
    """A scale matrix could not be factorized or an input was not finite."""


class InsufficientDataError(EdaError, ValueError):
    """Too few samples to fit a model."""


class DegeneratePopulationError(EdaError):
    """Fewer finite objective values than the selection size."""


class ConfigError(EdaError, ValueError):
    """Invalid run or experiment configuration."""


class RunFailure(EdaError):
    """An iteration of an EDA run failed.

    Carries the iteration index at which the failure happened.
    """

    def __init__(self, message, iteration):
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration
