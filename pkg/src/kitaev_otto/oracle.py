"""Brute-force references used to validate the fast paths.

Nothing here is used by the production pipeline. Everything is deliberately
naive: explicit Fock-space matrices, explicit 2x2 Gibbs states and plain ODE
integration.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.special import logsumexp

from .bdg import QuadraticForm
from .errors import DomainError
from .otto import CycleParams

__all__ = [
    "MAX_FOCK_SITES",
    "MAX_SPIN_SITES",
    "SPIN_HALF_COUPLING",
    "SPIN_HALF_FIELD",
    "annihilators",
    "canonical_energy",
    "grid_two_level_cycle",
    "integrate_relaxation",
    "many_body_spectrum",
    "ramp_excitation",
    "spin_ed_tfim",
    "two_level_cycle",
]

MAX_FOCK_SITES = 12
MAX_SPIN_SITES = 10

# With spin-1/2 operators s = sigma/2, -J_s sum s^x s^x - h_s sum s^z equals the
# Pauli-form chain used here when J_s = 4 J and h_s = 2 h.
SPIN_HALF_COUPLING = 4.0
SPIN_HALF_FIELD = 2.0

_SX = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
_SZ = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
_LOWER = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))  # |0><1| with |1> occupied


def _site_operator(op, site: int, N: int, string=None):
    """Kronecker product placing ``op`` at ``site``, ``string`` on all sites before it."""
    eye = sp.identity(2, format="csr")
    factors = [string if (string is not None and j < site) else eye for j in range(N)]
    factors[site] = op
    out = factors[0]
    for f in factors[1:]:
        out = sp.kron(out, f, format="csr")
    return out


def annihilators(N: int):
    """Jordan--Wigner ``c_j`` on the ``2^N`` Fock basis (site 0 is the leading bit)."""
    if N > MAX_FOCK_SITES:
        raise DomainError(f"Fock-space oracle limited to N <= {MAX_FOCK_SITES}, got {N}")
    return [_site_operator(_LOWER, j, N, string=_SZ) for j in range(N)]


def many_body_spectrum(q: QuadraticForm) -> np.ndarray:
    """Sorted ``2^N`` eigenvalues of ``sum 2 A_ij c+_i c_j + sum (B_ij c+_i c+_j + h.c.) + constant``."""
    N = q.size
    if N == 0:
        return np.array([float(q.constant)])
    c = annihilators(N)
    cd = [op.conj().T.tocsr() for op in c]
    dim = 2**N
    H = sp.csr_matrix((dim, dim), dtype=complex)
    for i in range(N):
        for j in range(N):
            if q.A[i, j] != 0:
                H = H + 2.0 * q.A[i, j] * (cd[i] @ c[j])
            if q.B[i, j] != 0:
                pair = q.B[i, j] * (cd[i] @ cd[j])
                H = H + pair + pair.conj().T
    dense = H.toarray() + q.constant * np.eye(dim)
    return np.linalg.eigvalsh(dense)


def spin_ed_tfim(N: int, h: float, J: float = 1.0, boundary: str = "open", spin_half: bool = False) -> np.ndarray:
    """Sorted spectrum of ``-J sum sigma^x_i sigma^x_{i+1} - h sum sigma^z_i`` on an open chain.

    With ``spin_half=True`` the operators are ``s = sigma / 2`` instead; the
    Pauli form is the one that maps onto the fermion chain with ``t = Delta = J``.
    """
    if str(boundary) not in ("open", "Boundary.OPEN"):
        raise DomainError("spin ED oracle only supports open boundaries")
    if not 1 <= N <= MAX_SPIN_SITES:
        raise DomainError(f"spin ED oracle supports 1 <= N <= {MAX_SPIN_SITES}, got {N}")
    scale_x, scale_z = (0.25, 0.5) if spin_half else (1.0, 1.0)
    dim = 2**N
    H = sp.csr_matrix((dim, dim))
    for i in range(N - 1):
        H = H - J * scale_x * (_site_operator(_SX, i, N) @ _site_operator(_SX, i + 1, N))
    for i in range(N):
        H = H - h * scale_z * _site_operator(_SZ, i, N)
    return np.linalg.eigvalsh(H.toarray())


def canonical_energy(energies, T: float) -> float:
    """Thermal average ``sum E e^{-E/T} / Z`` of a discrete spectrum."""
    E = np.asarray(energies, dtype=float)
    if T <= 0:
        raise DomainError("temperature must be positive")
    logw = -(E - E.min()) / T
    w = np.exp(logw - logsumexp(logw))
    return float(np.dot(w, E))


def _pair_hamiltonian(t_k: float, d_k: float, h: float) -> np.ndarray:
    # (h - t_k) sigma^z + Delta_k sigma^x, gap omega_k
    return np.array([[h - t_k, d_k], [d_k, -(h - t_k)]])


def _gibbs_populations(energies: np.ndarray, T: float) -> np.ndarray:
    logw = -(energies - energies.min()) / T
    return np.exp(logw - logsumexp(logw))


def two_level_cycle(t_k: float, d_k: float, params: CycleParams):
    """``(Q_h, Q_c, W)`` of one mode treated as its own two-level Otto cycle.

    The two-level Hamiltonian has gap ``omega_k``; each stroke is a trace
    difference ``Tr[H rho_after] - Tr[H rho_before]``.
    """
    e_i, v_i = np.linalg.eigh(_pair_hamiltonian(t_k, d_k, params.h_i))
    e_f, v_f = np.linalg.eigh(_pair_hamiltonian(t_k, d_k, params.h_f))
    H_i = v_i @ np.diag(e_i) @ v_i.T
    H_f = v_f @ np.diag(e_f) @ v_f.T

    # Start of the cycle: cold Gibbs state at h_i.
    p_cold = _gibbs_populations(e_i, params.T_c)
    rho_a = v_i @ np.diag(p_cold) @ v_i.T
    # Adiabatic ramp h_i -> h_f: populations follow eigenstate order.
    rho_b = v_f @ np.diag(p_cold) @ v_f.T
    # Hot thermalisation at h_f.
    p_hot = _gibbs_populations(e_f, params.T_h)
    rho_c = v_f @ np.diag(p_hot) @ v_f.T
    # Adiabatic ramp back h_f -> h_i.
    rho_d = v_i @ np.diag(p_hot) @ v_i.T

    energy = lambda H, rho: float(np.trace(H @ rho))  # noqa: E731
    q_h = energy(H_f, rho_c) - energy(H_f, rho_b)
    q_c = energy(H_i, rho_a) - energy(H_i, rho_d)
    w_up = energy(H_f, rho_b) - energy(H_i, rho_a)
    w_down = energy(H_i, rho_d) - energy(H_f, rho_c)
    return q_h, q_c, -(w_up + w_down)


def grid_two_level_cycle(table, params: CycleParams):
    """Sum of :func:`two_level_cycle` over a momentum table's ``(t_k, Delta_k)``."""
    parts = [two_level_cycle(float(t), float(d), params) for t, d in zip(table.t, table.delta)]
    q_h = math.fsum(p[0] for p in parts)
    q_c = math.fsum(p[1] for p in parts)
    w = math.fsum(p[2] for p in parts)
    return q_h, q_c, w


def integrate_relaxation(t: float, n0: float, f_tilde: float, gamma_sum: float) -> float:
    """Integrate ``dn/dt = 2 gamma (f - n)`` numerically up to ``t``."""
    if t == 0:
        return float(n0)
    sol = solve_ivp(
        lambda _, n: 2.0 * gamma_sum * (f_tilde - n),
        (0.0, t),
        [n0],
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    return float(sol.y[0, -1])


def ramp_excitation(t_k: float, d_k: float, h_start: float, h_end: float, v: float, settle: float = 0.0) -> float:
    """Time-averaged probability of leaving the instantaneous ground state during a linear ramp.

    Integrates the Schrodinger equation of the pair Hamiltonian while ``h``
    moves from ``h_start`` to ``h_end`` at speed ``v``, starting in the ground
    state, and averages ``1 - |<g(t)|psi(t)>|^2`` over the ramp.
    """
    if v <= 0:
        raise DomainError("ramp velocity must be positive")
    duration = abs(h_end - h_start) / v
    direction = math.copysign(1.0, h_end - h_start)

    def field(time):
        return h_start + direction * v * min(time, duration)

    _, vec = np.linalg.eigh(_pair_hamiltonian(t_k, d_k, h_start))
    psi0 = vec[:, 0].astype(complex)

    def rhs(time, y):
        psi = y[:2] + 1j * y[2:]
        d = -1j * (_pair_hamiltonian(t_k, d_k, field(time)) @ psi)
        return np.concatenate([d.real, d.imag])

    total = duration + settle
    times = np.linspace(0.0, total, 2001)
    sol = solve_ivp(
        rhs,
        (0.0, total),
        np.concatenate([psi0.real, psi0.imag]),
        method="DOP853",
        t_eval=times,
        rtol=1e-10,
        atol=1e-12,
    )
    excited = np.empty(times.size)
    for n, time in enumerate(sol.t):
        _, vec = np.linalg.eigh(_pair_hamiltonian(t_k, d_k, field(time)))
        psi = sol.y[:2, n] + 1j * sol.y[2:, n]
        excited[n] = 1.0 - abs(np.vdot(vec[:, 0], psi)) ** 2
    return float(np.mean(excited))
