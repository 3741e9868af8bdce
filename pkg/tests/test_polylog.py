import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from kitaev_otto.errors import DomainError
from kitaev_otto.polylog import polylog_unit_circle, zeta


def test_zeta_closed_forms():
    assert zeta(2) == pytest.approx(math.pi**2 / 6, abs=1e-13)
    assert zeta(4) == pytest.approx(math.pi**4 / 90, abs=1e-13)
    assert zeta(math.inf) == 1.0


def test_zeta_against_extended_precision():
    for s in (1.01, 1.1, 1.3, 2.5, 7.0, 40.0):
        assert zeta(s) == pytest.approx(float(mpmath.zeta(s)), abs=1e-10, rel=1e-12)


@pytest.mark.parametrize("s", [1.0, 0.5, 0.0, -2.0])
def test_zeta_rejects_nonconvergent(s):
    with pytest.raises(DomainError):
        zeta(s)


def test_polylog_closed_forms():
    assert polylog_unit_circle(2, math.pi) == pytest.approx(-(math.pi**2) / 12, abs=1e-12)
    li1 = polylog_unit_circle(1, math.pi)
    assert li1.real == pytest.approx(-math.log(2), abs=1e-12)
    assert abs(li1.imag) < 1e-12
    assert polylog_unit_circle(3, 0.0) == pytest.approx(zeta(3))


def test_polylog_matches_mpmath():
    with mpmath.workdps(30):
        ref = complex(mpmath.polylog(1.5, mpmath.exp(1j * mpmath.pi / 3)))
    assert abs(polylog_unit_circle(1.5, math.pi / 3) - ref) < 1e-10


def test_polylog_ten_million_term_partial_sum():
    s, k = 1.5, math.pi / 3
    n = 10_000_000
    re_parts, im_parts = [], []
    for start in range(1, n + 1, 1_000_000):
        r = np.arange(start, min(start + 1_000_000, n + 1), dtype=float)
        w = r**-s
        re_parts.append(math.fsum(w * np.cos(k * r)))
        im_parts.append(math.fsum(w * np.sin(k * r)))
    partial = complex(math.fsum(re_parts), math.fsum(im_parts))
    # Averaging the last two partial sums cancels the leading oscillating tail.
    last = cmath.exp(1j * k * n) / n**s
    estimate = partial - 0.5 * last
    assert abs(polylog_unit_circle(s, k) - estimate) < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    s=st.floats(min_value=0.05, max_value=6.0),
    k=st.floats(min_value=-3.1, max_value=3.1).filter(lambda x: abs(x) > 1e-3),
)
@example(s=1.9999999999999991, k=1.0)  # mpmath at default precision is wrong here
def test_polylog_property_against_mpmath(s, k):
    # Extended precision: near integer orders mpmath's own series loses digits.
    with mpmath.workdps(40):
        ref = complex(mpmath.polylog(mpmath.mpf(s), mpmath.expj(k)))
    assert abs(polylog_unit_circle(s, k) - ref) < 1e-10 * max(1.0, abs(ref))


def test_polylog_near_integer_orders_are_continuous():
    for m in (1, 2, 3):
        for off in (-5e-4, -1e-15, 1e-15, 1e-7, 4e-4):
            s = m + off
            with mpmath.workdps(40):
                ref = complex(mpmath.polylog(mpmath.mpf(s), mpmath.expj(0.7)))
            assert abs(polylog_unit_circle(s, 0.7) - ref) < 1e-10


def test_polylog_is_periodic_in_k():
    assert polylog_unit_circle(1.7, 0.4 + 2 * math.pi) == pytest.approx(polylog_unit_circle(1.7, 0.4), abs=1e-12)


def test_polylog_domain():
    with pytest.raises(DomainError):
        polylog_unit_circle(0.0, 1.0)
    with pytest.raises(DomainError):
        polylog_unit_circle(1.0, 0.0)
    with pytest.raises(DomainError):
        polylog_unit_circle(0.5, 2 * math.pi)
