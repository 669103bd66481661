"""Exception hierarchy shared across the package."""


class MuxepiError(Exception):
    """Base class for all errors raised by muxepi."""


class InvalidArgumentError(MuxepiError, ValueError):
    """An argument violates a documented precondition."""


class NonConvergenceError(MuxepiError):
    """An iterative solver did not converge within its iteration budget.

    Carries the last iterate and residual so callers can inspect or retry.
    """

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class ConfigError(MuxepiError):
    """A configuration file or flag set could not be validated."""
