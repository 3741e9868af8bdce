"""Momentum-space single-mode problem: grid, dispersion, Bogoliubov angle, gap."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .couplings import CouplingSpec, fourier_couplings
from .errors import DegenerateModeError, DomainError

__all__ = [
    "MomentumMode",
    "ModeTable",
    "bogoliubov_angle",
    "critical_field",
    "dispersion",
    "mode_table",
    "modes",
    "momentum_grid",
    "spectral_gap",
]

# Fourier sums are evaluated in row blocks of this many momenta.
_CHUNK = 512


def momentum_grid(N: int) -> np.ndarray:
    """``k_n = 2 pi n / N`` for ``n = -N/2+1, ..., N/2``, ascending."""
    if isinstance(N, bool) or int(N) != N or N < 2 or int(N) % 2:
        raise DomainError(f"N must be an even integer >= 2, got {N!r}")
    N = int(N)
    n = np.arange(-N // 2 + 1, N // 2 + 1)
    return 2.0 * np.pi * n / N


@dataclass(frozen=True)
class ModeTable:
    """Fourier couplings over the full momentum grid (read-only arrays)."""

    k: np.ndarray
    t: np.ndarray
    delta: np.ndarray

    def omega(self, h: float) -> np.ndarray:
        return 2.0 * np.hypot(h - self.t, self.delta)


@functools.lru_cache(maxsize=256)
def _cached_table(key: tuple) -> ModeTable:
    N, alpha1, alpha2, J, kac, _ = key
    spec = CouplingSpec(N=N, alpha1=alpha1, alpha2=alpha2, J=J, kac=kac)
    k = momentum_grid(N)
    # n = 0..N/2 computed once, negative momenta mirrored for exact symmetry.
    half = k[N // 2 - 1 :]
    t_half = np.empty_like(half)
    d_half = np.empty_like(half)
    for start in range(0, half.size, _CHUNK):
        t_half[start : start + _CHUNK], d_half[start : start + _CHUNK] = fourier_couplings(
            half[start : start + _CHUNK], spec
        )
    mirror = slice(N // 2 - 1, 0, -1)
    t = np.concatenate([t_half[mirror], t_half])
    d = np.concatenate([-d_half[mirror], d_half])
    for a in (k, t, d):
        a.setflags(write=False)
    return ModeTable(k, t, d)


def mode_table(spec: CouplingSpec) -> ModeTable:
    """Grid momenta with their ``t_k`` and ``Delta_k`` for a disorder-free spec."""
    if spec.disorder is not None:
        raise DomainError("momentum-space couplings need a disorder-free spec")
    key = spec.key[:5] + ("periodic",)
    return _cached_table(key)


def dispersion(k, h: float, spec: CouplingSpec):
    """Quasiparticle energy ``omega_k(h) = 2 sqrt((h - t_k)^2 + Delta_k^2)``."""
    t_k, d_k = fourier_couplings(k, spec)
    out = 2.0 * np.hypot(h - t_k, d_k)
    return float(out) if np.ndim(out) == 0 else out


def _angle(t_k: float, d_k: float, h: float) -> float:
    x = h - t_k
    if x == 0.0 and d_k == 0.0:
        raise DegenerateModeError(f"gapless mode at h={h}: Bogoliubov angle undefined")
    return math.atan2(d_k, x)


def bogoliubov_angle(k: float, h: float, spec: CouplingSpec) -> float:
    """``theta_k`` with ``h - t_k = (omega/2) cos theta`` and ``Delta_k = (omega/2) sin theta``."""
    t_k, d_k = fourier_couplings(float(k), spec)
    return _angle(t_k, d_k, h)


@dataclass(frozen=True)
class MomentumMode:
    k: float
    t_k: float
    delta_k: float
    theta_k: float
    omega: float

    @property
    def u(self) -> float:
        return math.cos(0.5 * self.theta_k)

    @property
    def v(self) -> float:
        return math.sin(0.5 * self.theta_k)


def modes(spec: CouplingSpec, h: float) -> list[MomentumMode]:
    """All grid modes at field ``h``; exactly gapless modes get ``theta = nan``."""
    table = mode_table(spec)
    out = []
    for k, t_k, d_k in zip(table.k, table.t, table.delta):
        try:
            theta = _angle(t_k, d_k, h)
        except DegenerateModeError:
            theta = math.nan
        out.append(MomentumMode(float(k), float(t_k), float(d_k), theta, 2.0 * math.hypot(h - t_k, d_k)))
    return out


def spectral_gap(h: float, spec: CouplingSpec) -> float:
    """Smallest quasiparticle energy at field ``h``."""
    if spec.translation_invariant:
        return float(np.min(mode_table(spec).omega(h)))
    from .bdg import build_quadratic, diagonalize

    return float(2.0 * diagonalize(build_quadratic(spec, h)).epsilon[0])


def critical_field(alpha: float) -> float:
    """Interpolated ferro/para critical field, used only to label sweep regions.

    ``1`` for ``alpha <= 1`` and ``0.35 (3.2 - alpha)`` for ``1 < alpha < 2``.
    """
    alpha = float(alpha)
    if not alpha > 0.0:
        raise DomainError(f"critical_field requires alpha > 0, got {alpha}")
    if alpha >= 2.0:
        raise DomainError(f"critical_field interpolation only valid for alpha < 2, got {alpha}")
    if alpha <= 1.0:
        return 1.0
    return 0.35 * (3.2 - alpha)
