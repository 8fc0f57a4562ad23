"""scikit-learn compatible wrapper around the analytic spectrum.

:class:`StarkZeemanSpectrum` is a stateless transformer: each input row is a
field point ``(B [T], E [V/m], theta [rad])`` and each output row the eight
ascending eigenvalues in the chosen unit. ``fit`` only validates the input,
so the transformer drops into pipelines and ``ColumnTransformer`` objects.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .analytic_solver import solve_spectra
from .core_model import ENERGY_UNITS, FieldPoint, MolecularParameters, build_hamiltonian, convert_energy
from .exceptions import MismatchAtPoint
from .numeric_oracle import jacobi_eigen_batch

N_FIELD_COLUMNS = 3


def check_field_grid(X) -> np.ndarray:
    """Validate an (n, 3) array of (B, E, theta) rows; returns a float copy."""
    X = check_array(X, dtype=np.float64, ensure_min_samples=1)
    if X.shape[1] != N_FIELD_COLUMNS:
        raise ValueError(f"expected {N_FIELD_COLUMNS} columns (B, E, theta), got {X.shape[1]}")
    if np.any(X[:, 0] < 0) or np.any(X[:, 1] < 0):
        raise ValueError("field magnitudes B and E must be nonnegative")
    if np.any(X[:, 2] < 0) or np.any(X[:, 2] > math.pi):
        raise ValueError("theta must lie in [0, pi]")
    return X


class StarkZeemanSpectrum(TransformerMixin, BaseEstimator):
    """Map field points to Stark-Zeeman eigenvalues.

    Parameters
    ----------
    delta_ghz : float
        Lambda-doubling frequency Delta/2pi in GHz.
    mu_e_debye : float
        Electric dipole moment in debye.
    unit : {"J", "K", "GHz"}
        Energy unit of the output.
    check_oracle : bool
        Also diagonalize each matrix numerically and raise
        :class:`~ohstark.exceptions.MismatchAtPoint` on disagreement above 1e-9.
    """

    def __init__(self, delta_ghz=1.667, mu_e_debye=1.66, unit="K", check_oracle=False):
        self.delta_ghz = delta_ghz
        self.mu_e_debye = mu_e_debye
        self.unit = unit
        self.check_oracle = check_oracle

    def fit(self, X, y=None):
        X = check_field_grid(X)
        if self.unit not in ENERGY_UNITS:
            raise ValueError(f"unit must be one of {ENERGY_UNITS}, got {self.unit!r}")
        self.params_ = MolecularParameters.from_lab_units(self.delta_ghz, self.mu_e_debye)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = check_field_grid(X)
        values = solve_spectra(self.params_, X[:, 0], X[:, 1], X[:, 2])
        if self.check_oracle:
            hams = np.array([build_hamiltonian(self.params_, FieldPoint(*row)) for row in X])
            ref = jacobi_eigen_batch(hams).values
            dev = np.abs(values - ref).max(axis=1) / np.abs(ref).max(axis=1)
            k = int(np.argmax(dev))
            if dev[k] > 1e-9:
                raise MismatchAtPoint(float(X[k, 0]), float(dev[k]), 1e-9)
        return convert_energy(values, self.unit)

    def get_feature_names_out(self, input_features=None):
        return np.array([f"ev{k}" for k in range(1, 9)], dtype=object)
