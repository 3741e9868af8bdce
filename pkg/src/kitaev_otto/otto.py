"""Ideal quantum Otto cycle: heats, work, efficiencies and operating mode.

The working substance is thermalised at field ``h_i`` by the cold bath and at
``h_f`` by the hot bath; both strokes between them are perfectly adiabatic,
so each quasiparticle keeps its occupation. Heats are positive when absorbed
by the system and ``W = Q_h + Q_c`` is the work done by it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .bdg import build_quadratic, diagonalize
from .couplings import CouplingSpec
from .errors import DomainError, PoleError
from .spectrum import dispersion, mode_table

__all__ = [
    "CycleOutcome",
    "CycleParams",
    "Mode",
    "carnot",
    "carnot_R",
    "classify_mode",
    "cycle_heats",
    "delta_f",
    "efficiencies",
    "fermi_occupation",
    "mode_energies",
    "run_cycle",
    "scaling_factor",
    "scaling_factor_R",
]

CLASSIFY_FLOOR = 1e-300


class Mode(enum.Enum):
    ENGINE = "E"
    REFRIGERATOR = "R"
    ACCELERATOR = "A"
    HEATER = "H"
    UNCLASSIFIED = "U"


# (sign Q_h, sign Q_c, sign W) -> mode
_SIGN_PATTERNS = {
    (-1, 1, -1): Mode.REFRIGERATOR,
    (1, -1, -1): Mode.ACCELERATOR,
    (1, -1, 1): Mode.ENGINE,
    (-1, -1, -1): Mode.HEATER,
}


@dataclass(frozen=True)
class CycleParams:
    """Fields and bath temperatures of one cycle (``k_B = 1``).

    Degenerate cycles (``h_f == h_i`` or ``T_h == T_c``) are accepted; they
    are useful limits and simply produce no engine.
    """

    h_i: float
    h_f: float
    T_c: float
    T_h: float
    eps: float = 1e-12

    def __post_init__(self):
        for name in ("h_i", "h_f", "T_c", "T_h", "eps"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.T_c <= 0 or self.T_h <= 0:
            raise DomainError(f"temperatures must be positive, got T_c={self.T_c}, T_h={self.T_h}")
        if self.T_h < self.T_c:
            raise DomainError(f"hot bath colder than cold bath: T_h={self.T_h} < T_c={self.T_c}")
        if self.h_f < self.h_i:
            raise DomainError(f"expected h_i <= h_f, got h_i={self.h_i}, h_f={self.h_f}")
        if self.eps <= 0:
            raise DomainError("classification tolerance must be positive")


def fermi_occupation(T, omega):
    """``1 / (1 + exp(omega / T))``, safe for any ``omega / T``."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise DomainError("temperature must be positive")
    out = expit(-np.asarray(omega, dtype=float) / T)
    return float(out) if out.ndim == 0 else out


def mode_energies(params: CycleParams, spec: CouplingSpec):
    """Quasiparticle energies at ``h_i`` and ``h_f``, paired mode by mode.

    Periodic disorder-free chains use the momentum grid (pairing by ``k``);
    otherwise the Nambu spectra are paired in ascending order, which assumes
    no level crossing between the two fields.
    """
    if spec.translation_invariant:
        table = mode_table(spec)
        return table.omega(params.h_i), table.omega(params.h_f)
    lo = diagonalize(build_quadratic(spec, params.h_i)).quasiparticle_energies
    hi = diagonalize(build_quadratic(spec, params.h_f)).quasiparticle_energies
    return lo, hi


def delta_f(k, params: CycleParams, spec: CouplingSpec):
    """Occupation change ``f(T_h, omega_k(h_f)) - f(T_c, omega_k(h_i))``."""
    w_i = dispersion(k, params.h_i, spec)
    w_f = dispersion(k, params.h_f, spec)
    return fermi_occupation(params.T_h, w_f) - fermi_occupation(params.T_c, w_i)


def _heats_from_energies(w_i, w_f, T_c, T_h):
    df = expit(-w_f / T_h) - expit(-w_i / T_c)
    q_h = math.fsum(w_f * df)
    q_c = -math.fsum(w_i * df)
    work = math.fsum((w_f - w_i) * df)
    return q_h, q_c, work


def cycle_heats(params: CycleParams, spec: CouplingSpec):
    """``(Q_h, Q_c, W)`` summed over all quasiparticle modes."""
    w_i, w_f = mode_energies(params, spec)
    return _heats_from_energies(w_i, w_f, params.T_c, params.T_h)


def classify_mode(Q_h: float, Q_c: float, W: float, eps: float = 1e-12) -> Mode:
    """Operating mode from the heat/work sign pattern, with a relative dead band."""
    band = eps * (abs(Q_h) + abs(Q_c) + abs(W) + CLASSIFY_FLOOR)
    signs = tuple(1 if x > band else -1 if x < -band else 0 for x in (Q_h, Q_c, W))
    return _SIGN_PATTERNS.get(signs, Mode.UNCLASSIFIED)


def efficiencies(Q_h: float, Q_c: float, W: float, mode: Mode):
    """``(eta, eta_R)``; each is ``None`` outside its own mode."""
    eta = W / Q_h if mode is Mode.ENGINE else None
    eta_r = Q_c / abs(W) if mode is Mode.REFRIGERATOR else None
    return eta, eta_r


def _check_temps(T_c, T_h):
    if not (T_h > T_c > 0):
        raise DomainError(f"Carnot bounds need T_h > T_c > 0, got T_c={T_c}, T_h={T_h}")


def carnot(T_c: float, T_h: float) -> float:
    _check_temps(T_c, T_h)
    return 1.0 - T_c / T_h


def carnot_R(T_c: float, T_h: float) -> float:
    _check_temps(T_c, T_h)
    return 1.0 / (T_h / T_c - 1.0)


def _pole_guard(denominator, bound, eps, what):
    if abs(denominator) <= eps * max(1.0, abs(bound)):
        raise PoleError(f"{what} denominator {denominator:.3e} vanishes: cycle saturates the Carnot bound")


def scaling_factor(W: float, Q_h: float, T_c: float, T_h: float, N: int, eps: float = 1e-12) -> float:
    """Engine scaling factor per spin, ``W / (eta_Carnot - W/Q_h) / N``."""
    bound = carnot(T_c, T_h)
    if W == 0.0:
        return 0.0
    denom = bound - W / Q_h
    _pole_guard(denom, bound, eps, "engine scaling factor")
    return W / denom / N


def scaling_factor_R(Q_c: float, W: float, T_c: float, T_h: float, N: int, eps: float = 1e-12) -> float:
    """Refrigerator scaling factor per spin, ``Q_c / (eta_RCarnot - Q_c/|W|) / N``."""
    bound = carnot_R(T_c, T_h)
    if Q_c == 0.0:
        return 0.0
    denom = bound - Q_c / abs(W)
    _pole_guard(denom, bound, eps, "refrigerator scaling factor")
    return Q_c / denom / N


@dataclass(frozen=True)
class CycleOutcome:
    Q_h: float
    Q_c: float
    W: float
    mode: Mode
    eta: float | None = None
    eta_R: float | None = None
    pi_per_spin: float | None = None
    piR_per_spin: float | None = None


def outcome_from_heats(Q_h, Q_c, W, params: CycleParams, N: int) -> CycleOutcome:
    mode = classify_mode(Q_h, Q_c, W, params.eps)
    eta, eta_r = efficiencies(Q_h, Q_c, W, mode)
    pi = pi_r = None
    if params.T_h > params.T_c:
        if mode is Mode.ENGINE:
            pi = scaling_factor(W, Q_h, params.T_c, params.T_h, N)
        elif mode is Mode.REFRIGERATOR:
            pi_r = scaling_factor_R(Q_c, W, params.T_c, params.T_h, N)
    return CycleOutcome(Q_h, Q_c, W, mode, eta, eta_r, pi, pi_r)


def run_cycle(params: CycleParams, spec: CouplingSpec) -> CycleOutcome:
    """Full thermodynamic outcome of one ideal cycle."""
    return outcome_from_heats(*cycle_heats(params, spec), params, spec.N)
