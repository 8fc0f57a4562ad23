"""Chiral operator C that anticommutes with the Stark-Zeeman Hamiltonian.

C is a pi rotation of the doublet pseudo-spin about x combined with a pi
rotation of the J = 3/2 rotor about y:

    C = exp(-i pi sigma_x / 2) (x) exp(-i pi Jy / hbar) = i R

with R a real antidiagonal sign matrix. The explicit matrix is the canonical
object; the exponential construction is kept only to validate it.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .core_model import pauli_matrices, spin_matrices
from .exceptions import ConstructionMismatch

MATCH_TOL = 1e-14

# antidiagonal signs of R, row by row (C[i, 7 - i] = i * sign)
_R_SIGNS = (1, -1, 1, -1, 1, -1, 1, -1)


@dataclass(frozen=True)
class ChiralOperator:
    c: np.ndarray
    r: np.ndarray


def explicit_chiral_matrix() -> np.ndarray:
    r = np.zeros((8, 8))
    for i, sign in enumerate(_R_SIGNS):
        r[i, 7 - i] = sign
    return r


def exp_rotation(generator, angle: float) -> np.ndarray:
    """exp(-i angle G) for Hermitian G (in units where hbar = 1), by spectral decomposition."""
    w, u = np.linalg.eigh(generator)
    return (u * np.exp(-1j * angle * w)) @ u.conj().T


def doublet_pi_rotation() -> np.ndarray:
    """exp(-i pi sigma_x / 2)."""
    sx, _, _ = pauli_matrices()
    return exp_rotation(sx, math.pi / 2)


def rotor_pi_rotation() -> np.ndarray:
    """exp(-i pi Jy / hbar) for spin 3/2."""
    _, jy, _ = spin_matrices()
    return exp_rotation(jy, math.pi)


def wigner_d_pi(j: float = 1.5) -> np.ndarray:
    """Wigner small-d matrix at beta = pi: d[m', m] = (-1)**(j - m) delta(m', -m).

    Rows and columns run over m = j, j - 1, ..., -j.
    """
    ms = np.arange(j, -j - 1, -1)
    d = np.zeros((len(ms), len(ms)))
    for col, m in enumerate(ms):
        row = int(np.flatnonzero(np.isclose(ms, -m))[0])
        d[row, col] = (-1) ** round(j - m)
    return d


def build_chiral_operator() -> ChiralOperator:
    """Return C, after checking the exponential route against the explicit matrix."""
    rotor = rotor_pi_rotation()
    if np.abs(rotor - wigner_d_pi()).max() > MATCH_TOL:
        raise ConstructionMismatch("exp(-i pi Jy) disagrees with the Wigner d-matrix at pi")
    from_exp = np.kron(doublet_pi_rotation(), rotor)
    r = explicit_chiral_matrix()
    c = 1j * r
    err = np.abs(from_exp - c).max()
    if err > MATCH_TOL:
        raise ConstructionMismatch(f"exponential and explicit C differ by {err:.3e}")
    return ChiralOperator(c=c, r=r)


def anticommutator(a, b):
    return a @ b + b @ a


def commutator(a, b):
    return a @ b - b @ a


def anticommutation_residual(h, chiral: ChiralOperator | None = None) -> float:
    """||H R + R H||_F / ||H||_F, evaluated in real arithmetic (C = iR)."""
    r = explicit_chiral_matrix() if chiral is None else chiral.r
    h = np.asarray(h)
    norm = np.linalg.norm(h)
    return float(np.linalg.norm(anticommutator(h, r)) / norm) if norm else 0.0


def conjugation_residual(h, chiral: ChiralOperator) -> float:
    """||C^-1 H C + H||_F / ||H||_F."""
    c = chiral.c
    h = np.asarray(h)
    norm = np.linalg.norm(h)
    return float(np.linalg.norm(c.conj().T @ h @ c + h) / norm) if norm else 0.0


def pair_eigenvector(psi_plus, chiral: ChiralOperator) -> np.ndarray:
    """C psi; an eigenvector of H with eigenvalue lambda maps to one with -lambda."""
    return chiral.c @ np.asarray(psi_plus, dtype=complex)


def kron_anticommutator_identity_check(m1, m2, m3, m4) -> float:
    """Frobenius residual of {A(x)B, C(x)D} = ([A,C](x)[B,D] + {A,C}(x){B,D}) / 2."""
    lhs = anticommutator(np.kron(m1, m2), np.kron(m3, m4))
    rhs = 0.5 * (
        np.kron(commutator(m1, m3), commutator(m2, m4))
        + np.kron(anticommutator(m1, m3), anticommutator(m2, m4))
    )
    return float(np.linalg.norm(lhs - rhs))
