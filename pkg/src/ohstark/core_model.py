"""Stark-Zeeman Hamiltonian of ground-state OH (J = 3/2, lambda doublet).

Two independent constructions are provided:

* :func:`build_hamiltonian` writes every entry of the 8x8 matrix directly.
* :func:`build_kronecker_form` assembles the same operator from spin-1/2
  (doublet) and spin-3/2 (rotor) factors with Kronecker products.

They deliberately share no entry-level helper so that each can be used to
check the other. All energies are in joules. Basis order is doublet-major:
rows 0-3 are the lower (-hbar*Delta/2) manifold with M = 3/2, 1/2, -1/2, -3/2,
rows 4-7 the upper manifold in the same M order.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .constants import CONSTANTS, GHZ, KV_PER_CM
from .exceptions import ParameterError, UnitError

ENERGY_UNITS = ("J", "K", "GHz")


@dataclass(frozen=True)
class MolecularParameters:
    """Lambda-doubling angular frequency ``delta`` (rad/s) and dipole ``mu_e`` (C m)."""

    delta: float
    mu_e: float

    def __post_init__(self):
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ParameterError(f"delta must be positive and finite, got {self.delta!r}")
        if not (self.mu_e > 0 and math.isfinite(self.mu_e)):
            raise ParameterError(f"mu_e must be positive and finite, got {self.mu_e!r}")

    @classmethod
    def from_lab_units(cls, delta_ghz: float = 1.667, mu_e_debye: float = 1.66) -> "MolecularParameters":
        """Build from Delta/2pi in GHz and the dipole moment in debye."""
        return cls(delta=2.0 * math.pi * delta_ghz * GHZ, mu_e=mu_e_debye * CONSTANTS.debye)

    @classmethod
    def oh(cls) -> "MolecularParameters":
        """OH X(2Pi_3/2): Delta = 2pi x 1.667 GHz, mu_e = 1.66 D."""
        return cls.from_lab_units(1.667, 1.66)

    @property
    def energy_scale(self) -> float:
        """hbar*Delta in joules; the dimensionless unit used for numerics."""
        return CONSTANTS.hbar * self.delta


@dataclass(frozen=True)
class FieldPoint:
    """Magnetic field ``b`` (T), electric field ``e`` (V/m), angle ``theta`` (rad)."""

    b: float
    e: float
    theta: float = math.pi / 2

    def __post_init__(self):
        if not (self.b >= 0 and math.isfinite(self.b)):
            raise ParameterError(f"b must be >= 0, got {self.b!r}")
        if not (self.e >= 0 and math.isfinite(self.e)):
            raise ParameterError(f"e must be >= 0, got {self.e!r}")
        if not (0.0 <= self.theta <= math.pi):
            raise ParameterError(f"theta must lie in [0, pi], got {self.theta!r}")

    @classmethod
    def from_lab_units(cls, b_tesla: float, e_kvcm: float, theta_deg: float = 90.0) -> "FieldPoint":
        theta = math.radians(theta_deg)
        # radians(180) overshoots pi by one ulp on some platforms
        return cls(b=b_tesla, e=e_kvcm * KV_PER_CM, theta=min(theta, math.pi))


def spin_matrices(hbar: float = 1.0):
    """Spin-3/2 matrices (Jx, Jy, Jz) with Jz = hbar/2 * diag(3, 1, -1, -3)."""
    r3 = math.sqrt(3.0)
    jx = 0.5 * hbar * np.array(
        [[0, r3, 0, 0],
         [r3, 0, 2, 0],
         [0, 2, 0, r3],
         [0, 0, r3, 0]], dtype=float)
    jy = 0.5j * hbar * np.array(
        [[0, -r3, 0, 0],
         [r3, 0, -2, 0],
         [0, 2, 0, -r3],
         [0, 0, r3, 0]], dtype=complex)
    jz = 0.5 * hbar * np.diag([3.0, 1.0, -1.0, -3.0])
    return jx, jy, jz


def pauli_matrices():
    sx = np.array([[0, 1], [1, 0]], dtype=float)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=float)
    return sx, sy, sz


def build_hamiltonian(p: MolecularParameters, f: FieldPoint) -> np.ndarray:
    """Explicit 8x8 Stark-Zeeman matrix, entry by entry, in joules."""
    d = 0.5 * CONSTANTS.hbar * p.delta
    zb = CONSTANTS.mu_b * f.b
    ze = p.mu_e * f.e
    c = math.cos(f.theta)
    s = math.sin(f.theta)
    r3 = math.sqrt(3.0)

    h = np.zeros((8, 8))
    h[0, 0] = -d - 6 / 5 * zb
    h[1, 1] = -d - 2 / 5 * zb
    h[2, 2] = -d + 2 / 5 * zb
    h[3, 3] = -d + 6 / 5 * zb
    h[4, 4] = d - 6 / 5 * zb
    h[5, 5] = d - 2 / 5 * zb
    h[6, 6] = d + 2 / 5 * zb
    h[7, 7] = d + 6 / 5 * zb

    upper = {
        (0, 4): 3 / 5 * ze * c,
        (0, 5): -r3 / 5 * ze * s,
        (1, 4): -r3 / 5 * ze * s,
        (1, 5): 1 / 5 * ze * c,
        (1, 6): -2 / 5 * ze * s,
        (2, 5): -2 / 5 * ze * s,
        (2, 6): -1 / 5 * ze * c,
        (2, 7): -r3 / 5 * ze * s,
        (3, 6): -r3 / 5 * ze * s,
        (3, 7): -3 / 5 * ze * c,
    }
    for (i, j), v in upper.items():
        h[i, j] = v
        h[j, i] = v
    return h


def doublet_term(p: MolecularParameters) -> np.ndarray:
    _, _, sz = pauli_matrices()
    return -(CONSTANTS.hbar * p.delta / 2) * np.kron(sz, np.eye(4))


def zeeman_term(f: FieldPoint) -> np.ndarray:
    hbar = CONSTANTS.hbar
    _, _, jz = spin_matrices(hbar)
    return -(4 * CONSTANTS.mu_b * f.b / (5 * hbar)) * np.kron(np.eye(2), jz)


def stark_term(p: MolecularParameters, f: FieldPoint) -> np.ndarray:
    """Parity-mixing coupling; sigma_x (x) (Jz cos(theta) - Jx sin(theta))."""
    hbar = CONSTANTS.hbar
    jx, _, jz = spin_matrices(hbar)
    sx, _, _ = pauli_matrices()
    axis = jz * math.cos(f.theta) - jx * math.sin(f.theta)
    return (2 * p.mu_e * f.e / (5 * hbar)) * np.kron(sx, axis)


def build_kronecker_form(p: MolecularParameters, f: FieldPoint) -> np.ndarray:
    return doublet_term(p) + zeeman_term(f) + stark_term(p, f)


def convert_energy(x, unit: str):
    """Convert joules to ``unit`` (one of J, K, GHz). Works on scalars and arrays."""
    if unit == "J":
        return x
    if unit == "K":
        return x / CONSTANTS.k_b
    if unit == "GHz":
        return x / (CONSTANTS.h * GHZ)
    raise UnitError(f"unknown energy unit {unit!r}; expected one of {ENERGY_UNITS}")
