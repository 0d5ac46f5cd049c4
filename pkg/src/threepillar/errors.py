"""Exception hierarchy shared by all modules."""


class ThreePillarError(Exception):
    """Base class for every error raised by this package."""


class InvalidProblemError(ThreePillarError, ValueError):
    pass


class InfeasibleError(ThreePillarError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DimensionError(ThreePillarError, ValueError):
    pass


class InvalidSpringError(ThreePillarError, ValueError):
    pass


class SingularSystemError(ThreePillarError):
    pass


class InvalidSweepError(ThreePillarError, ValueError):
    pass


class InvalidModelError(ThreePillarError, ValueError):
    pass


class InvalidCutoffError(ThreePillarError, ValueError):
    pass


class CutoffUndefinedError(ThreePillarError, ValueError):
    """Cutoff scale below ``2a``: the cutoff position would be imaginary."""


class InvalidParameterError(ThreePillarError, ValueError):
    pass


class ConfigurationError(ThreePillarError, ValueError):
    pass


class NumericError(ThreePillarError, ArithmeticError):
    """A numerical kernel failed to reach its tolerance.

    ``partial`` and ``error_estimate`` carry whatever the kernel had when it
    gave up, so callers can report diagnostics.
    """

    def __init__(self, message, partial=None, error_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate
