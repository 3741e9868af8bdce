"""Bath-driven relaxation of quasiparticle occupations and a ramp adiabaticity check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .couplings import CouplingSpec
from .errors import ConfigurationError, DomainError
from .otto import fermi_occupation
from .spectrum import mode_table

__all__ = [
    "AdiabaticityReport",
    "BathSpec",
    "RampSpec",
    "adiabaticity_metric",
    "bath_average",
    "internal_energy",
    "occupation_at",
    "relax_occupations",
]


@dataclass(frozen=True, eq=False)
class BathSpec:
    """Thermal reservoirs and their coupling rates.

    ``rates`` is either ``None`` (every bath couples to every mode with rate
    ``gamma0``), a 1-D array of per-bath rates shared by all modes, or a 2-D
    ``(n_baths, n_modes)`` array.
    """

    temperatures: tuple
    rates: np.ndarray | None = field(default=None, repr=False)
    gamma0: float = 1.0

    def __post_init__(self):
        temps = tuple(float(T) for T in self.temperatures)
        if not temps:
            raise ConfigurationError("at least one bath is required")
        if any(not (T > 0 and math.isfinite(T)) for T in temps):
            raise DomainError(f"bath temperatures must be positive and finite, got {temps}")
        object.__setattr__(self, "temperatures", temps)
        if self.rates is not None:
            rates = np.array(self.rates, dtype=float)
            if rates.ndim not in (1, 2) or rates.shape[0] != len(temps):
                raise ConfigurationError(f"rates must have one row per bath, got shape {rates.shape}")
            if np.any(rates < 0) or not np.all(np.isfinite(rates)):
                raise ConfigurationError("rates must be finite and non-negative")
            rates.setflags(write=False)
            object.__setattr__(self, "rates", rates)
        elif not self.gamma0 > 0:
            raise ConfigurationError("gamma0 must be positive")

    def rates_for(self, k_index: int | None) -> np.ndarray:
        if self.rates is None:
            return np.full(len(self.temperatures), float(self.gamma0))
        if self.rates.ndim == 1:
            return self.rates
        if k_index is None:
            raise ConfigurationError("mode-resolved rates need a mode index")
        return self.rates[:, k_index]


@dataclass(frozen=True)
class RampSpec:
    h_start: float
    h_end: float
    v: float

    def __post_init__(self):
        if not (self.v > 0 and math.isfinite(self.v)):
            raise DomainError(f"ramp velocity must be positive, got {self.v}")


def bath_average(bath: BathSpec, omega: float, k_index: int | None = None) -> float:
    """Rate-weighted Fermi factor of one mode across all baths."""
    gamma = bath.rates_for(k_index)
    total = math.fsum(gamma)
    if total <= 0:
        raise ConfigurationError(f"mode {k_index} is not coupled to any bath")
    f = np.array([fermi_occupation(T, omega) for T in bath.temperatures])
    return math.fsum(gamma * f) / total


def occupation_at(t: float, n0: float, f_tilde: float, gamma_sum: float) -> float:
    """Occupation after relaxing for time ``t`` towards ``f_tilde`` at total rate ``gamma_sum``."""
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")
    decay = math.exp(-2.0 * gamma_sum * t)
    return f_tilde * (1.0 - decay) + n0 * decay


def relax_occupations(bath: BathSpec, omegas, n0, t: float) -> np.ndarray:
    """Apply :func:`occupation_at` mode by mode."""
    omegas = np.asarray(omegas, dtype=float)
    n0 = np.broadcast_to(np.asarray(n0, dtype=float), omegas.shape)
    out = np.empty_like(omegas)
    for k, (w, n) in enumerate(zip(omegas, n0)):
        gamma = bath.rates_for(k)
        out[k] = occupation_at(t, n, bath_average(bath, w, k), math.fsum(gamma))
    return out


def internal_energy(occupations, omegas) -> float:
    """``sum_k omega_k (n_k - 1/2)``."""
    n = np.asarray(occupations, dtype=float)
    w = np.asarray(omegas, dtype=float)
    if n.shape != w.shape:
        raise ConfigurationError(f"{n.size} occupations for {w.size} modes")
    return math.fsum(w * (n - 0.5))


@dataclass(frozen=True)
class AdiabaticityReport:
    """Per-mode excitation estimates along a ramp.

    ``probabilities[k]`` is ``nan`` where ``gapless[k]`` is set.
    """

    k: np.ndarray
    probabilities: np.ndarray
    gapless: np.ndarray
    field_at_min_gap: np.ndarray

    @property
    def max(self) -> float:
        finite = self.probabilities[~self.gapless]
        return float(finite.max()) if finite.size else math.nan

    @property
    def ok(self) -> bool:
        return not self.gapless.any()


def adiabaticity_metric(ramp: RampSpec, spec: CouplingSpec) -> AdiabaticityReport:
    """First-order excitation estimate ``(v |<e|dH/dh|g>| / gap^2)^2`` for every grid mode.

    For a mode with ``H_k = (h - t_k) sigma^z + Delta_k sigma^x`` the matrix
    element is ``2 Delta_k / omega_k`` and the gap is ``omega_k``, giving
    ``v^2 (2 Delta_k)^2 / omega_k^6``. It is evaluated where the gap is
    smallest along the ramp.
    """
    table = mode_table(spec)
    lo, hi = sorted((ramp.h_start, ramp.h_end))
    h_star = np.clip(table.t, lo, hi)
    omega = 2.0 * np.hypot(h_star - table.t, table.delta)
    gapless = omega == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        p = ramp.v**2 * (2.0 * table.delta) ** 2 / omega**6
    p = np.where(gapless, np.nan, np.where(table.delta == 0.0, 0.0, p))
    return AdiabaticityReport(table.k, p, gapless, h_star)
