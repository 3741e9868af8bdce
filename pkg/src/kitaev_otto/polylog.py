"""Riemann zeta and the polylogarithm on the unit circle.

Both are evaluated to close to double precision:

* ``zeta`` uses Euler--Maclaurin summation, continued to negative arguments
  with the functional equation.
* ``polylog_unit_circle`` uses the expansion of ``Li_s(e^mu)`` around
  ``mu = 0``::

      Li_s(e^mu) = Gamma(1 - s) (-mu)^(s-1) + sum_n zeta(s - n) mu^n / n!

  which converges for ``|mu| < 2 pi`` and therefore on the whole unit circle
  once ``k`` is reduced to ``(-pi, pi]``. Integer orders use the limiting
  form with a harmonic number and a logarithm.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from .errors import DomainError, NumericError

# B_2, B_4, ..., B_24
_BERNOULLI_EVEN = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
    Fraction(854513, 138),
    Fraction(-236364091, 2730),
]
_EM_COEFFS = [float(b / math.factorial(2 * j + 2)) for j, b in enumerate(_BERNOULLI_EVEN)]
_EM_CUTOFF = 32
_EM_HEAD = np.arange(1, _EM_CUTOFF, dtype=float)

_SERIES_TOL = 1e-18
_SERIES_MAX_TERMS = 600
# Non-integer orders closer than this to an integer are interpolated.
_NEAR_INTEGER = 1e-3
_INTERP_STEP = 2e-3


def _zeta_em(s: float) -> float:
    """Euler--Maclaurin evaluation, accurate for real ``s > -10``, ``s != 1``."""
    m = float(_EM_CUTOFF)
    total = math.fsum(_EM_HEAD ** (-s))
    total += m ** (1.0 - s) / (s - 1.0) + 0.5 * m ** (-s)
    rising = s  # s (s+1) ... (s+2j-2)
    power = m ** (-s - 1.0)
    for j, coeff in enumerate(_EM_COEFFS):
        if j > 0:
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            power /= m * m
        total += coeff * rising * power
    return total


def _sin_half_pi(x: float) -> float:
    """``sin(pi x / 2)`` with exact zeros and units at integer ``x``."""
    if float(x).is_integer():
        return (0.0, 1.0, 0.0, -1.0)[int(x) % 4]
    return math.sin(0.5 * math.pi * x)


def _zeta_any(s: float) -> float:
    """Analytically continued zeta for real ``s != 1``."""
    if s == 1.0:
        raise DomainError("zeta has a pole at s = 1")
    if s >= 0.0:
        if s == 0.0:
            return -0.5
        return _zeta_em(s)
    return _zeta_over_factorial(s, 0)


def _zeta_over_factorial(x: float, n: int) -> float:
    """``zeta(x) / n!``, kept finite for large ``n`` and very negative ``x``."""
    if x >= 0.0:
        return _zeta_any(x) / math.factorial(n) if n < 170 else _zeta_any(x) * math.exp(-math.lgamma(n + 1))
    # zeta(x) = 2^x pi^(x-1) sin(pi x/2) Gamma(1-x) zeta(1-x)
    sign = _sin_half_pi(x)
    if sign == 0.0:
        return 0.0
    log_mag = x * math.log(2.0) + (x - 1.0) * math.log(math.pi) + math.lgamma(1.0 - x) - math.lgamma(n + 1)
    return sign * math.exp(log_mag) * _zeta_em(1.0 - x)


def zeta(alpha: float) -> float:
    """Riemann zeta function for real ``alpha > 1``."""
    alpha = float(alpha)
    if not math.isfinite(alpha) and alpha > 0:
        return 1.0
    if not alpha > 1.0:
        raise DomainError(f"zeta(alpha) requires alpha > 1, got {alpha}")
    return _zeta_em(alpha)


def _reduce_angle(k: float) -> float:
    """Map ``k`` into ``(-pi, pi]``."""
    r = math.remainder(k, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


def _sum_series(first: complex, s: float, mu: complex, skip: int | None = None) -> complex:
    total = first
    mu_pow = 1.0 + 0.0j
    small = 0
    for n in range(_SERIES_MAX_TERMS):
        if n != skip:
            term = _zeta_over_factorial(s - n, n) * mu_pow
            total += term
            if abs(term) < _SERIES_TOL * max(1.0, abs(total)):
                small += 1
                if small >= 4:
                    return total
            else:
                small = 0
        mu_pow *= mu
    raise NumericError(f"polylog series did not converge for s={s}, mu={mu}")


def _li_noninteger(s: float, k: float) -> complex:
    mu = 1j * k
    head = math.gamma(1.0 - s) * (-mu) ** (s - 1.0)
    return _sum_series(head, s, mu)


def _li_integer(m: int, k: float) -> complex:
    mu = 1j * k
    harmonic = math.fsum(1.0 / j for j in range(1, m))
    head = mu ** (m - 1) / math.factorial(m - 1) * (harmonic - cmath.log(-mu))
    return _sum_series(head, float(m), mu, skip=m - 1)


def polylog_unit_circle(alpha: float, k: float) -> complex:
    """``Li_alpha(e^{ik}) = sum_{r>=1} e^{ikr} / r^alpha``.

    Defined for ``alpha > 1`` at any ``k`` and for ``0 < alpha <= 1`` away
    from ``k = 0 (mod 2 pi)``. Absolute error is at the 1e-12 level.
    """
    alpha = float(alpha)
    k = float(k)
    if not (alpha > 0.0) or math.isnan(alpha):
        raise DomainError(f"polylog requires alpha > 0, got {alpha}")
    if not math.isfinite(k):
        raise DomainError(f"non-finite momentum {k}")
    k = _reduce_angle(k)
    if k == 0.0:
        if alpha <= 1.0:
            raise DomainError(f"Li_alpha(1) diverges for alpha = {alpha} <= 1")
        return complex(zeta(alpha), 0.0)
    if math.isinf(alpha):
        return cmath.exp(1j * k)

    m = round(alpha)
    offset = alpha - m
    if offset == 0.0:
        return _li_integer(int(m), k)
    if abs(offset) >= _NEAR_INTEGER or m == 0:
        return _li_noninteger(alpha, k)

    # Gamma(1-s) and zeta(s-m+1) have cancelling poles here; interpolate in s.
    nodes = [m + j * _INTERP_STEP for j in range(-3, 4)]
    values = [_li_integer(int(m), k) if j == 0 else _li_noninteger(x, k) for j, x in zip(range(-3, 4), nodes)]
    re = BarycentricInterpolator(nodes, [v.real for v in values])(alpha)
    im = BarycentricInterpolator(nodes, [v.imag for v in values])(alpha)
    return complex(float(re), float(im))
