"""Exception types shared across the package."""


class CasimirError(Exception):
    """Base class for all package errors."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ConvergenceError(CasimirError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    The partial result is kept so callers can decide whether it is usable.
    """

    def __init__(self, message, value=float("nan"), error=float("nan")):
        super().__init__(message)
        self.value = value
        self.error = error


class CalibrationError(CasimirError, ValueError):
    """Input data cannot support the requested fit."""


class SimulationError(CasimirError, ValueError):
    """A synthetic measurement plan is physically infeasible."""


class ConfigError(CasimirError, ValueError):
    """Invalid run configuration; ``path`` locates the offending entry."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
