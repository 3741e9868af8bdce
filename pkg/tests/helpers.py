"""Random-input generators shared by several test modules."""

import numpy as np

from kitaev_otto.bdg import QuadraticForm
from kitaev_otto.couplings import CouplingSpec
from kitaev_otto.otto import CycleParams


def random_quadratic(rng, n=None, complex_entries=False) -> QuadraticForm:
    n = int(rng.integers(1, 9)) if n is None else n
    A = rng.normal(size=(n, n))
    B = rng.normal(size=(n, n))
    if complex_entries:
        A = A + 1j * rng.normal(size=(n, n))
        B = B + 1j * rng.normal(size=(n, n))
    A = 0.5 * (A + A.conj().T)
    B = 0.5 * (B - B.T)
    return QuadraticForm(A, B, constant=float(rng.normal()))


def random_cycle(rng, sizes=range(4, 101, 2), alpha=(0.01, 3.0), fields=(0.0, 2.5), temps=(0.1, 5.0)):
    N = int(rng.choice(list(sizes)))
    a = float(rng.uniform(*alpha))
    h_i, h_f = np.sort(rng.uniform(*fields, size=2))
    T_c, T_h = np.sort(rng.uniform(*temps, size=2))
    return CouplingSpec.uniform(N, a), CycleParams(h_i, h_f, T_c, T_h)
