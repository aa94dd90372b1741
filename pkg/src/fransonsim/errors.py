"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes, so keep the classes coarse:
one class per failure category, not per call site.
"""


class FransonError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FransonError, ValueError):
    """A numeric argument is outside the operation's domain."""


class ConfigurationError(FransonError, ValueError):
    """A physically inconsistent or unusable configuration."""


class DataError(FransonError, ValueError):
    """Malformed tabulated input data."""


class ContractViolationError(FransonError):
    """An internal contract was violated (unnormalized spectrum, unsorted events)."""


class ConfigParseError(FransonError, ValueError):
    """Experiment or problem file could not be parsed.

    ``line`` carries the 1-based offending line number when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfeasibleDesignError(FransonError):
    """A length-design problem has no nonnegative solution.

    ``unconstrained_lengths_mm`` holds the sign-unconstrained solution of the
    linear system for diagnosis.
    """

    def __init__(self, message, unconstrained_lengths_mm=None):
        super().__init__(message)
        self.unconstrained_lengths_mm = unconstrained_lengths_mm


class StatisticsError(FransonError):
    """Not enough counts to estimate a fringe."""
