"""Coherent evolution and doublet/rotor reduced states.

The 8-level space factors as doublet (2) (x) rotor (4), doublet index major,
matching the row order of :func:`ohstark.core_model.build_hamiltonian`.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .constants import CONSTANTS
from .core_model import FieldPoint, MolecularParameters, build_hamiltonian, pauli_matrices
from .exceptions import InvalidDensityMatrix
from .numeric_oracle import jacobi_eigen
from .symmetry import doublet_pi_rotation

STATE_TOL = 1e-12


def propagator(p: MolecularParameters, f: FieldPoint, t: float) -> np.ndarray:
    """U(t) = V exp(-i Lambda t / hbar) V^T from the Jacobi eigendecomposition."""
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    es = jacobi_eigen(build_hamiltonian(p, f))
    phases = np.exp(-1j * es.values * t / CONSTANTS.hbar)
    return (es.vectors * phases) @ es.vectors.T


def evolve(p: MolecularParameters, f: FieldPoint, psi0, times) -> np.ndarray:
    """States psi(t) for each t in ``times``; shape (len(times), 8)."""
    psi0 = np.asarray(psi0, dtype=complex)
    es = jacobi_eigen(build_hamiltonian(p, f))
    amps = es.vectors.T @ psi0
    times = np.asarray(times, dtype=float)
    phases = np.exp(-1j * np.outer(times, es.values) / CONSTANTS.hbar)
    return (phases * amps) @ es.vectors.T


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("zero state vector")
    return psi / norm


def density_matrix(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def _check_state(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise InvalidDensityMatrix(f"expected an 8x8 density matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > STATE_TOL:
        raise InvalidDensityMatrix("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > STATE_TOL:
        raise InvalidDensityMatrix(f"density matrix trace {np.trace(rho).real:.15g} != 1")
    return rho.reshape(2, 4, 2, 4)


def partial_trace_rotor(rho8) -> np.ndarray:
    """Reduced 2x2 doublet state (rotor traced out)."""
    return np.einsum("ajbj->ab", _check_state(rho8))


def partial_trace_doublet(rho8) -> np.ndarray:
    """Reduced 4x4 rotor state (doublet traced out)."""
    return np.einsum("aiak->ik", _check_state(rho8))


def purity(rho) -> float:
    rho = np.asarray(rho)
    return float(np.einsum("ij,ji->", rho, rho).real)


def von_neumann_entropy(rho) -> float:
    w = np.linalg.eigvalsh(np.asarray(rho))
    w = w[w > 1e-15]
    return float(-(w * np.log(w)).sum())


def doublet_bloch_vector(psi) -> np.ndarray:
    """(<sigma_x>, <sigma_y>, <sigma_z>) of the reduced doublet state."""
    rho2 = partial_trace_rotor(density_matrix(psi))
    return np.array([np.trace(rho2 @ s).real for s in pauli_matrices()])


def pseudo_spin_flip() -> np.ndarray:
    """exp(-i pi sigma_x / 2) (x) I4: swaps the two doublet manifolds."""
    return np.kron(doublet_pi_rotation(), np.eye(4))


def parity_oscillation_period(p: MolecularParameters, f: FieldPoint | None = None) -> float:
    """Period of <sigma_x>(t) for psi0 = (e1 + e5)/sqrt(2), located numerically.

    The first two zero crossings of <sigma_x> are bracketed on a coarse time grid
    and refined with Brent's method; the period is twice their separation.
    """
    f = FieldPoint(0.0, 0.0) if f is None else f
    psi0 = np.zeros(8, dtype=complex)
    psi0[0] = psi0[4] = 1 / math.sqrt(2)
    es = jacobi_eigen(build_hamiltonian(p, f))
    amps = es.vectors.T @ psi0

    def sx(t):
        psi = es.vectors @ (amps * np.exp(-1j * es.values * t / CONSTANTS.hbar))
        return doublet_bloch_vector(psi)[0]

    guess = 2 * math.pi / p.delta
    grid = np.linspace(0.0, 2 * guess, 801)
    vals = np.array([sx(t) for t in grid])
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if len(idx) < 2:
        raise ArithmeticError("no oscillation found within two nominal periods")
    crossings = [brentq(sx, grid[i], grid[i + 1], xtol=1e-30, rtol=1e-15) for i in idx[:2]]
    return 2 * (crossings[1] - crossings[0])
