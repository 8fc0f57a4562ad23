"""Exact Stark-Zeeman spectrum of ground-state OH in combined E and B fields."""

from .analytic_solver import Label, Spectrum, solve_quartic_in_lambda_sq, solve_spectra, solve_spectrum
from .charpoly import ScaledVariables, charpoly_oracle, even_coefficients, scale_variables
from .constants import CONSTANTS, PhysicalConstants
from .core_model import (
    FieldPoint,
    MolecularParameters,
    build_hamiltonian,
    build_kronecker_form,
    convert_energy,
    pauli_matrices,
    spin_matrices,
)
from .numeric_oracle import EigenSystem, jacobi_eigen, jacobi_eigen_batch, residual_norms
from .symmetry import ChiralOperator, build_chiral_operator
from .sweep import SweepConfig, SweepResult, eigen_point, run_sweep
from .verify import verify_all

__version__ = "0.1.0"
