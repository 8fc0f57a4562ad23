"""Characteristic polynomial of the Stark-Zeeman matrix.

The closed-form even coefficients are evaluated on scaled variables
``b_t = 4 mu_B B``, ``e_t = 2 mu_e E``, ``d_t = 5 hbar Delta``. Use
:meth:`ScaledVariables.rescaled` to work in units of hbar*Delta: the degree-8
terms then stay O(1)-O(1e10) instead of O(1e-190).

Coefficients are returned in ascending order, ``p[k]`` multiplying
``lambda**k``, with the monic convention ``p[8] = 1`` so that
``p[0] = det(H)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import CONSTANTS
from .core_model import FieldPoint, MolecularParameters


@dataclass(frozen=True)
class ScaledVariables:
    b_t: float
    e_t: float
    d_t: float
    theta: float

    def rescaled(self, unit: float) -> "ScaledVariables":
        """Express the three energies in multiples of ``unit`` joules."""
        return ScaledVariables(self.b_t / unit, self.e_t / unit, self.d_t / unit, self.theta)


def scale_variables(p: MolecularParameters, f: FieldPoint) -> ScaledVariables:
    return ScaledVariables(
        b_t=4 * CONSTANTS.mu_b * f.b,
        e_t=2 * p.mu_e * f.e,
        d_t=5 * CONSTANTS.hbar * p.delta,
        theta=f.theta,
    )


def even_coefficients_from_cosines(b, e, d, cos2, cos4):
    """Evaluate (p0, p2, p4, p6) given cos(2 theta) and cos(4 theta).

    Only ``+ - *`` and division by integer constants are used, so the
    arguments may be floats, numpy arrays or gmpy2 multiprecision numbers.
    """
    b2, e2, d2 = b * b, e * e, d * d
    b4, e4, d4 = b2 * b2, e2 * e2, d2 * d2
    b6, e6, d6 = b4 * b2, e4 * e2, d4 * d2
    b8, e8, d8 = b4 * b4, e4 * e4, d4 * d4

    p0 = (
        81 * b8 + 324 * b4 * e4 + 81 * e8 - 180 * b6 * d2
        + 756 * b4 * e2 * d2 - 756 * b2 * e4 * d2 + 180 * e6 * d2
        + 118 * b4 * d4 - 264 * b2 * e2 * d4 + 118 * e4 * d4
        - 20 * b2 * d6 + 20 * e2 * d6 + d8
        - 4 * b2 * e2 * (81 * b4 + 81 * e4 + 54 * b2 * d2 - 54 * e2 * d2 - 7 * d4) * cos2
        + 162 * b4 * e4 * cos4
    ) / 100000000
    p2 = (
        -9 * b6 - 9 * e6 - d6 / 5 - 59 * e4 * d2 / 5
        - 3 * e2 * d4 - 9 * b4 * e2 - 23 * b4 * d2 / 5 - 9 * b2 * e4
        + b2 * d4 + 48 * b2 * e2 * d2 / 5
        + 2 * b2 * e2 * (9 * b2 + 9 * e2 + 17 * d2 / 5) * cos2
    ) / 50000
    p4 = (
        59 * b4 + 36 * b2 * e2 + 10 * b2 * d2 - 82 * b2 * e2 * cos2
        + 59 * e4 + 30 * e2 * d2 + 3 * d4
    ) / 5000
    p6 = -(b2 + e2 + d2 / 5) / 5
    return p0, p2, p4, p6


def even_coefficients(s: ScaledVariables):
    """Closed-form (p0, p2, p4, p6) in the energy unit of ``s``.

    Fields of ``s`` may be numpy arrays; results broadcast accordingly.
    """
    theta = np.asarray(s.theta, dtype=float)
    return even_coefficients_from_cosines(
        s.b_t, s.e_t, s.d_t, np.cos(2 * theta), np.cos(4 * theta)
    )


def charpoly_oracle(m) -> np.ndarray:
    """All nine coefficients of det(m - lambda I) by Faddeev-LeVerrier.

    ``m`` may be a single (n, n) matrix or a stack (..., n, n); the output has
    shape (..., n + 1). For even n this equals the monic det(lambda I - m).
    """
    a = np.asarray(m)
    n = a.shape[-1]
    eye = np.eye(n, dtype=a.dtype)
    c = np.zeros(a.shape[:-2] + (n + 1,), dtype=np.result_type(a.dtype, float))
    c[..., n] = 1.0
    mk = np.zeros_like(a)
    for k in range(1, n + 1):
        mk = a @ mk + c[..., n - k + 1, None, None] * eye
        c[..., n - k] = -np.trace(a @ mk, axis1=-2, axis2=-1) / k
    if n % 2:
        c = -c
    return c


def coefficient_scale(p) -> np.ndarray:
    """max(|p0|, |p2|, |p4|, |p6|, 1) for coefficient arrays of shape (..., 9)."""
    p = np.asarray(p)
    even = np.abs(p[..., [0, 2, 4, 6]])
    return np.maximum(even.max(axis=-1), 1.0)


def odd_residual(p) -> np.ndarray:
    """Largest |p1|, |p3|, |p5|, |p7| relative to :func:`coefficient_scale`."""
    p = np.asarray(p)
    return np.abs(p[..., [1, 3, 5, 7]]).max(axis=-1) / coefficient_scale(p)
