"""Exception hierarchy shared by the library and the command-line front end.

Each class carries the process exit code the CLI maps it to.
"""


class OttoError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ConfigurationError(OttoError, ValueError):
    """Invalid or inconsistent user configuration."""

    exit_code = 2


class DomainError(OttoError, ValueError):
    """Arguments outside the mathematical domain of an operation."""

    exit_code = 5


class DegenerateModeError(DomainError):
    """A quasiparticle mode is exactly gapless where a gap is required."""


class PoleError(DomainError):
    """A scaling-factor denominator vanishes (Carnot-saturating cycle)."""


class NumericError(OttoError, ArithmeticError):
    """A numerical routine failed to converge or lost accuracy."""

    exit_code = 4

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
