import math

import numpy as np
import pytest

from kitaev_otto.bdg import QuadraticForm, build_quadratic, diagonalize
from kitaev_otto.couplings import CouplingSpec
from kitaev_otto.dynamics import internal_energy
from kitaev_otto.errors import DomainError
from kitaev_otto.oracle import (
    SPIN_HALF_COUPLING,
    SPIN_HALF_FIELD,
    canonical_energy,
    grid_two_level_cycle,
    integrate_relaxation,
    many_body_spectrum,
    spin_ed_tfim,
    two_level_cycle,
)
from kitaev_otto.otto import CycleParams, cycle_heats, fermi_occupation
from kitaev_otto.spectrum import mode_table

from .helpers import random_quadratic

NN = math.inf


def test_two_level_cycle_trivial():
    assert two_level_cycle(0.3, 0.2, CycleParams(0.5, 0.5, 1.0, 1.0)) == pytest.approx((0, 0, 0), abs=1e-15)


def test_two_level_cycle_pure_field():
    # Two-level system with gap 2h: textbook Otto values.
    p = CycleParams(0.4, 0.9, 0.3, 0.8)
    df = fermi_occupation(p.T_h, 2 * p.h_f) - fermi_occupation(p.T_c, 2 * p.h_i)
    q_h, q_c, w = two_level_cycle(0.0, 0.0, p)
    assert q_h == pytest.approx(2 * p.h_f * df, abs=1e-15)
    assert q_c == pytest.approx(-2 * p.h_i * df, abs=1e-15)
    assert w == pytest.approx(2 * (p.h_f - p.h_i) * df, abs=1e-15)


def test_grid_oracle_at_map_temperatures():
    spec = CouplingSpec.uniform(4, 30)
    p = CycleParams(0.5, 1.0, 0.38, 0.57)
    assert np.allclose(grid_two_level_cycle(mode_table(spec), p), cycle_heats(p, spec), rtol=0, atol=1e-12)


def test_many_body_spectrum_trivial_form():
    q = QuadraticForm(np.zeros((3, 3)), np.zeros((3, 3)), constant=1.7)
    assert np.allclose(many_body_spectrum(q), 1.7)


def test_many_body_two_sites():
    q = build_quadratic(CouplingSpec.uniform(2, NN, boundary="open"), 0.0)
    assert np.allclose(many_body_spectrum(q), [-1, -1, 1, 1], atol=1e-14)
    assert np.allclose(diagonalize(q).many_body_energies(), [-1, -1, 1, 1], atol=1e-14)


def test_many_body_eight_site_open_chain():
    q = build_quadratic(CouplingSpec.uniform(8, 30, boundary="open"), 0.9)
    assert np.max(np.abs(many_body_spectrum(q) - diagonalize(q).many_body_energies())) < 1e-8


def test_many_body_resource_guard():
    with pytest.raises(DomainError):
        many_body_spectrum(QuadraticForm(np.zeros((13, 13)), np.zeros((13, 13))))


def test_many_body_phase_invariance():
    rng = np.random.default_rng(4)
    q = random_quadratic(rng, n=5, complex_entries=True)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
    D = np.diag(phases)
    rotated = QuadraticForm(D.conj() @ q.A @ D, D.conj() @ q.B @ D.conj(), q.constant)
    assert np.allclose(many_body_spectrum(q), many_body_spectrum(rotated), atol=1e-10)


def test_spin_ed_small_cases():
    assert np.allclose(spin_ed_tfim(1, 0.7), [-0.7, 0.7])
    assert np.allclose(spin_ed_tfim(2, 0.0, J=1.3), [-1.3, -1.3, 1.3, 1.3])
    with pytest.raises(DomainError):
        spin_ed_tfim(4, 0.5, boundary="periodic")
    with pytest.raises(DomainError):
        spin_ed_tfim(11, 0.5)


def test_spin_half_conversion_constant():
    J, h = 0.8, 0.35
    pauli = spin_ed_tfim(4, h, J=J)
    spin_half = spin_ed_tfim(4, SPIN_HALF_FIELD * h, J=SPIN_HALF_COUPLING * J, spin_half=True)
    assert np.allclose(pauli, spin_half, atol=1e-13)


@pytest.mark.parametrize("h", [0.0, 0.4, 0.9, 1.7])
def test_spin_ed_matches_fermions(h):
    q = build_quadratic(CouplingSpec.uniform(8, NN, boundary="open"), h)
    assert np.max(np.abs(spin_ed_tfim(8, h) - many_body_spectrum(q))) < 1e-8


def test_canonical_energy_vs_internal_energy():
    for N in (4, 6, 10):
        spec = CouplingSpec.uniform(N, 1.3, boundary="open")
        sys = diagonalize(build_quadratic(spec, 0.6))
        levels = sys.many_body_energies()
        w = sys.quasiparticle_energies
        for T in (0.2, 1.0, 3.0):
            grand = internal_energy(fermi_occupation(T, w), w) + sys.offset
            assert canonical_energy(levels, T) == pytest.approx(grand, abs=1e-8)


def test_integrate_relaxation():
    assert integrate_relaxation(0.0, 0.3, 0.1, 1.0) == 0.3
    exact = 0.1 + (0.9 - 0.1) * math.exp(-1.0)
    assert integrate_relaxation(0.5, 0.9, 0.1, 1.0) == pytest.approx(exact, abs=1e-10)
