"""Power-law hopping/pairing amplitudes and their Fourier transforms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .polylog import polylog_unit_circle, zeta

__all__ = [
    "Boundary",
    "CouplingSpec",
    "amplitude",
    "disorder_table",
    "fourier_couplings",
    "fourier_couplings_limit",
    "kac_factor",
    "pairwise_kac_constant",
    "polylog_unit_circle",
    "zeta",
]


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    OPEN = "open"


def _check_size(N) -> int:
    if isinstance(N, bool) or int(N) != N or N < 2 or int(N) % 2:
        raise DomainError(f"chain length must be an even integer >= 2, got {N!r}")
    return int(N)


def _check_exponent(alpha, name="alpha") -> float:
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0.0:
        raise DomainError(f"{name} must be >= 0, got {alpha}")
    return alpha


@dataclass(frozen=True, eq=False)
class CouplingSpec:
    """Chain geometry and coupling law.

    ``alpha1`` governs hopping, ``alpha2`` pairing; ``math.inf`` selects the
    nearest-neighbour limit. ``disorder``, when given, is a symmetric ``N x N``
    table of site-resolved couplings that replaces both power laws (and the
    boundary handling: the table lists every bond explicitly).
    """

    N: int
    alpha1: float
    alpha2: float
    J: float = 1.0
    kac: bool = True
    boundary: Boundary = Boundary.PERIODIC
    disorder: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "N", _check_size(self.N))
        object.__setattr__(self, "alpha1", _check_exponent(self.alpha1, "alpha1"))
        object.__setattr__(self, "alpha2", _check_exponent(self.alpha2, "alpha2"))
        if not math.isfinite(self.J):
            raise DomainError(f"J must be finite, got {self.J}")
        object.__setattr__(self, "J", float(self.J))
        try:
            object.__setattr__(self, "boundary", Boundary(self.boundary))
        except ValueError:
            raise ConfigurationError(f"unknown boundary {self.boundary!r}") from None
        if self.disorder is not None:
            table = np.array(self.disorder, dtype=float)
            if table.shape != (self.N, self.N):
                raise ConfigurationError(f"disorder table must be {self.N}x{self.N}, got shape {table.shape}")
            if not np.all(np.isfinite(table)):
                raise ConfigurationError("disorder table contains non-finite entries")
            if not np.allclose(table, table.T, rtol=0.0, atol=1e-14):
                raise ConfigurationError("disorder table must be symmetric")
            if np.any(np.diag(table) != 0.0):
                raise ConfigurationError("disorder table must have a zero diagonal")
            table.setflags(write=False)
            object.__setattr__(self, "disorder", table)

    @classmethod
    def uniform(cls, N, alpha, **kwargs) -> "CouplingSpec":
        """Spec with equal hopping and pairing exponents."""
        return cls(N=N, alpha1=alpha, alpha2=alpha, **kwargs)

    @property
    def translation_invariant(self) -> bool:
        return self.disorder is None and self.boundary is Boundary.PERIODIC

    @property
    def max_distance(self) -> int:
        """Largest bond length present in the real-space Hamiltonian."""
        if self.boundary is Boundary.PERIODIC:
            return self.N // 2 - 1
        return self.N - 1

    @property
    def key(self) -> tuple:
        """Hashable identity of a disorder-free spec (used for caching)."""
        if self.disorder is not None:
            raise ValueError("specs with a disorder table have no cache key")
        return (self.N, self.alpha1, self.alpha2, self.J, self.kac, self.boundary.value)


def kac_factor(alpha: float, N: int) -> float:
    """``N_alpha = sum_{r=1}^{N/2} r^-alpha``."""
    alpha = _check_exponent(alpha)
    N = _check_size(N)
    if math.isinf(alpha):
        return 1.0
    return math.fsum(r ** -alpha for r in range(1, N // 2 + 1))


def _power_law_weights(alpha: float, N: int, kac: bool, J: float, rmax: int) -> np.ndarray:
    r = np.arange(1, rmax + 1, dtype=float)
    if math.isinf(alpha):
        w = (r == 1.0).astype(float)
    else:
        w = r ** -alpha
    norm = kac_factor(alpha, N) if kac else 1.0
    return J * w / norm


def amplitude(r: int, alpha: float, spec: CouplingSpec) -> float:
    """Hopping or pairing amplitude at distance ``r``: ``J / (N_alpha r^alpha)``.

    ``r`` may be any distance realisable on the chain, ``1 <= r <= N - 1``.
    """
    if int(r) != r or not 1 <= r <= spec.N - 1:
        raise DomainError(f"distance r={r!r} outside 1..{spec.N - 1}")
    alpha = _check_exponent(alpha)
    if math.isinf(alpha):
        base = 1.0 if r == 1 else 0.0
    else:
        base = float(r) ** -alpha
    norm = kac_factor(alpha, spec.N) if spec.kac else 1.0
    return spec.J * base / norm


def hopping_amplitudes(spec: CouplingSpec, rmax: int | None = None) -> np.ndarray:
    """``t_r`` for ``r = 1..rmax`` (default ``spec.max_distance``)."""
    rmax = spec.max_distance if rmax is None else rmax
    return _power_law_weights(spec.alpha1, spec.N, spec.kac, spec.J, rmax)


def pairing_amplitudes(spec: CouplingSpec, rmax: int | None = None) -> np.ndarray:
    """``Delta_r`` for ``r = 1..rmax`` (default ``spec.max_distance``)."""
    rmax = spec.max_distance if rmax is None else rmax
    return _power_law_weights(spec.alpha2, spec.N, spec.kac, spec.J, rmax)


def fourier_couplings(k, spec: CouplingSpec):
    """Finite-chain transforms ``t_k = sum_r t_r cos(kr)``, ``Delta_k = sum_r Delta_r sin(kr)``.

    The sums run over ``r = 1..N/2-1``. ``k`` may be a scalar or an array;
    the return type follows it.
    """
    rmax = spec.N // 2 - 1
    t_r = hopping_amplitudes(spec, rmax)
    d_r = pairing_amplitudes(spec, rmax)
    kk = np.asarray(k, dtype=float)
    phase = np.multiply.outer(kk, np.arange(1, rmax + 1, dtype=float))
    t_k = np.cos(phase) @ t_r
    d_k = np.sin(phase) @ d_r
    if kk.ndim == 0:
        return float(t_k), float(d_k)
    return t_k, d_k


def fourier_couplings_limit(k: float, alpha1: float, alpha2: float):
    """Thermodynamic-limit transforms ``Re Li_a1(e^ik)/zeta(a1)`` and ``Im Li_a2(e^ik)/zeta(a2)``.

    Only defined when both exponents exceed 1; for shorter ranges the Kac
    normalisation diverges and ``fourier_couplings`` must be used.
    """
    for name, a in (("alpha1", alpha1), ("alpha2", alpha2)):
        if not a > 1.0:
            raise DomainError(f"{name}={a} <= 1: limit form diverges, use the finite-N couplings")
    t_k = polylog_unit_circle(alpha1, k).real / zeta(alpha1)
    d_k = polylog_unit_circle(alpha2, k).imag / zeta(alpha2)
    return t_k, d_k


def pairwise_kac_constant(alpha: float, N: int) -> float:
    """``K(alpha) = (1/(N-1)) sum_{i<j} |i-j|^-alpha`` over an open chain of ``N`` sites."""
    alpha = _check_exponent(alpha)
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    if math.isinf(alpha):
        return 1.0
    return math.fsum((N - r) * r ** -alpha for r in range(1, int(N))) / (N - 1)


def disorder_table(N: int, alpha: float, J: float = 1.0, strength: float = 0.0, seed=None) -> np.ndarray:
    """Site-resolved couplings ``J_ij = J / (K(alpha) |i-j|^alpha)``, optionally randomised.

    Each bond is multiplied by ``1 + strength * u`` with ``u`` uniform in
    ``[-1, 1]`` (symmetric in ``i, j``).
    """
    alpha = _check_exponent(alpha)
    idx = np.arange(N)
    dist = np.abs(np.subtract.outer(idx, idx)).astype(float)
    with np.errstate(divide="ignore"):
        if math.isinf(alpha):
            base = (dist == 1.0).astype(float)
        else:
            base = np.where(dist > 0, dist ** -alpha, 0.0)
    table = J * base / pairwise_kac_constant(alpha, N)
    if strength:
        rng = np.random.default_rng(seed)
        noise = np.triu(rng.uniform(-1.0, 1.0, size=(N, N)), 1)
        table = table * (1.0 + strength * (noise + noise.T))
    return table
