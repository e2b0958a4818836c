"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument or configuration value is invalid."""


class DataError(ValueError):
    """Input data is missing, malformed, or unusable."""


class NumericalError(RuntimeError):
    """A numerical step failed, typically a singular linear system."""
