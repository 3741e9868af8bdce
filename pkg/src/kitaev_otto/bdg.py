"""Real-space quadratic Hamiltonians and their Nambu (Bogoliubov--de Gennes) diagonalisation.

Convention: a quadratic form ``(A, B, constant)`` stands for the operator::

    H = sum_ij [A_ij c_i^+ c_j + A_ij^* c_j^+ c_i] + sum_ij [B_ij c_i^+ c_j^+ + h.c.] + constant
      = Psi^+ H_nambu Psi + Tr A + constant

with ``H_nambu = [[A, B], [-B^*, -A^*]]`` and ``Psi = (c, c^+)``. After
diagonalisation ``H = sum_mu 2 eps_mu (n_mu - 1/2) + Tr A + constant``, so the
physical quasiparticle energies are ``2 eps_mu``; for a periodic chain they
coincide with the momentum-space ``omega_k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .couplings import CouplingSpec, hopping_amplitudes, pairing_amplitudes
from .errors import DomainError, NumericError

__all__ = ["NambuSystem", "QuadraticForm", "build_quadratic", "diagonalize", "particle_hole_check", "swap_matrix"]

_SYMMETRY_TOL = 1e-14
_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    A: np.ndarray
    B: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        A = np.asarray(self.A)
        B = np.asarray(self.B)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
            raise DomainError(f"A and B must be square and congruent, got {A.shape} and {B.shape}")
        scale = max(1.0, float(np.max(np.abs(A), initial=0.0)), float(np.max(np.abs(B), initial=0.0)))
        if np.max(np.abs(A - A.conj().T), initial=0.0) > _SYMMETRY_TOL * scale:
            raise DomainError("A must be Hermitian")
        if np.max(np.abs(B + B.T), initial=0.0) > _SYMMETRY_TOL * scale:
            raise DomainError("B must be antisymmetric")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def size(self) -> int:
        return self.A.shape[0]

    @property
    def offset(self) -> float:
        """c-number added to ``sum_mu 2 eps_mu (n_mu - 1/2)`` to give the operator."""
        return float(np.trace(self.A).real) + self.constant

    def nambu(self) -> np.ndarray:
        A, B = self.A, self.B
        return np.block([[A, B], [-B.conj(), -A.conj()]])


def swap_matrix(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [eye, zero]])


def _bond_list(spec: CouplingSpec):
    """``(i, j, t, delta)`` arrays for bonds ``c_i^+ c_j`` with ``i = j + r``."""
    N = spec.N
    if spec.disorder is not None:
        i, j = np.nonzero(np.tril(spec.disorder, -1))
        vals = spec.disorder[i, j]
        return i, j, vals, vals
    rmax = spec.max_distance
    t_r = hopping_amplitudes(spec, rmax)
    d_r = pairing_amplitudes(spec, rmax)
    sites = np.arange(N)
    rows, cols, ts, ds = [], [], [], []
    for r in range(1, rmax + 1):
        if spec.boundary.value == "periodic":
            j = sites
            i = (sites + r) % N
        else:
            j = sites[: N - r]
            i = j + r
        rows.append(i)
        cols.append(j)
        ts.append(np.full(j.size, t_r[r - 1]))
        ds.append(np.full(j.size, d_r[r - 1]))
    if not rows:
        empty = np.zeros(0, dtype=int)
        return empty, empty, np.zeros(0), np.zeros(0)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(ts), np.concatenate(ds)


def build_quadratic(spec: CouplingSpec, h: float) -> QuadraticForm:
    """Real-space form of ``-sum [t_r c+_{j+r} c_j + Delta_r c+_{j+r} c+_j + h.c.] - h sum (1 - 2 n_j)``."""
    N = spec.N
    A = np.zeros((N, N))
    B = np.zeros((N, N))
    i, j, t, d = _bond_list(spec)
    np.add.at(A, (i, j), -0.5 * t)
    np.add.at(A, (j, i), -0.5 * t)
    np.add.at(B, (i, j), -0.5 * d)
    np.add.at(B, (j, i), 0.5 * d)
    A[np.diag_indices(N)] += h
    return QuadraticForm(A, B, constant=-h * N)


@dataclass(frozen=True, eq=False)
class NambuSystem:
    """Diagonalised quadratic form.

    ``epsilon`` holds the non-negative Nambu eigenvalues in ascending order;
    column ``mu`` of ``(U; V)`` is the matching eigenvector. Quasiparticle
    annihilators are ``gamma_mu = sum_j (U_jmu^* c_j + V_jmu^* c_j^+)``.
    """

    H_nambu: np.ndarray
    epsilon: np.ndarray
    U: np.ndarray
    V: np.ndarray
    offset: float = 0.0

    @property
    def quasiparticle_energies(self) -> np.ndarray:
        """Physical single-quasiparticle energies ``2 eps_mu``."""
        return 2.0 * self.epsilon

    @property
    def unitary(self) -> np.ndarray:
        U, V = self.U, self.V
        return np.block([[U, V.conj()], [V, U.conj()]])

    def many_body_energies(self) -> np.ndarray:
        """All ``2^N`` energies ``sum 2 eps (n - 1/2) + offset``, sorted."""
        energies = np.array([self.offset - np.sum(self.epsilon)])
        for e in self.quasiparticle_energies:
            energies = np.concatenate([energies, energies + e])
        return np.sort(energies)


def _majorana_kernel(H: np.ndarray) -> np.ndarray:
    """Real antisymmetric ``K`` with ``Psi^+ H Psi = i w^T K w`` for Majoranas ``w = (c + c^+, i(c^+ - c))``."""
    n = H.shape[0] // 2
    eye = np.eye(n)
    T = 0.5 * np.block([[eye, 1j * eye], [eye, -1j * eye]])
    K = (T.conj().T @ H @ T).imag
    return 0.5 * (K - K.T)


def _schur_pairs(K: np.ndarray):
    """Pair up Majorana columns of the real Schur form of ``K``: ``[(p, q, lam), ...]``."""
    T, Z = scipy.linalg.schur(K, output="real")
    dim = K.shape[0]
    pairs, singles = [], []
    i = 0
    while i < dim:
        if i + 1 < dim and T[i + 1, i] != 0.0:
            pairs.append((i, i + 1, 0.5 * (T[i, i + 1] - T[i + 1, i])))
            i += 2
        else:
            singles.append(i)
            i += 1
    # 1x1 blocks are numerically-zero eigenvalues; any pairing of them is valid.
    for p, q in zip(singles[0::2], singles[1::2]):
        pairs.append((p, q, 0.5 * (T[p, q] - T[q, p])))
    return pairs, Z


def diagonalize(q: QuadraticForm) -> NambuSystem:
    """Bogoliubov--de Gennes diagonalisation with canonical ``(U, V)``."""
    H = q.nambu()
    n = q.size
    if n == 0:
        empty = np.zeros((0, 0))
        return NambuSystem(H, np.zeros(0), empty, empty, q.offset)
    pairs, Z = _schur_pairs(_majorana_kernel(H))
    if len(pairs) != n:
        raise NumericError(f"Schur form yielded {len(pairs)} mode pairs for {n} sites")
    eps = np.empty(n)
    U = np.empty((n, n), dtype=complex)
    V = np.empty((n, n), dtype=complex)
    for mu, (p, q_, lam) in enumerate(pairs):
        if lam < 0:
            p, q_, lam = q_, p, -lam
        alpha = Z[:n, p] + 1j * Z[:n, q_]
        beta = Z[n:, p] + 1j * Z[n:, q_]
        U[:, mu] = 0.5 * (alpha - 1j * beta).conj()
        V[:, mu] = 0.5 * (alpha + 1j * beta).conj()
        eps[mu] = 2.0 * lam
    order = np.argsort(eps, kind="stable")
    eps, U, V = eps[order], U[:, order], V[:, order]
    if np.isrealobj(q.A) and np.isrealobj(q.B):
        # Real couplings admit real (U, V); fix each column's global phase.
        for mu in range(n):
            col = np.concatenate([U[:, mu], V[:, mu]])
            big = col[np.argmax(np.abs(col))]
            phase = big / abs(big)
            U[:, mu] /= phase
            V[:, mu] /= phase
        if np.max(np.abs(U.imag), initial=0.0) < 1e-10 and np.max(np.abs(V.imag), initial=0.0) < 1e-10:
            U, V = U.real.copy(), V.real.copy()
    system = NambuSystem(H, eps, U, V, q.offset)
    W = system.unitary
    residual = float(np.max(np.abs(H @ W - W * np.concatenate([eps, -eps])), initial=0.0))
    scale = max(1.0, float(np.max(np.abs(H), initial=0.0)))
    if residual > _RESIDUAL_TOL * scale:
        raise NumericError(f"BdG residual {residual:.3e} exceeds tolerance", residual=residual)
    return system


def particle_hole_check(system) -> float:
    """``max |H S + S H^*|`` for a :class:`NambuSystem` or a bare Nambu matrix."""
    H = system.H_nambu if isinstance(system, NambuSystem) else np.asarray(system)
    S = swap_matrix(H.shape[0] // 2)
    return float(np.max(np.abs(H @ S + S @ H.conj()), initial=0.0))
