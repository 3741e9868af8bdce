"""Ideal quantum Otto cycles with long-range Kitaev chains as the working substance."""

from .couplings import Boundary, CouplingSpec
from .errors import ConfigurationError, DegenerateModeError, DomainError, NumericError, OttoError, PoleError
from .otto import CycleOutcome, CycleParams, Mode, run_cycle

__all__ = [
    "Boundary",
    "ConfigurationError",
    "CouplingSpec",
    "CycleOutcome",
    "CycleParams",
    "DegenerateModeError",
    "DomainError",
    "Mode",
    "NumericError",
    "OttoError",
    "PoleError",
    "run_cycle",
]

__version__ = "0.1.0"
