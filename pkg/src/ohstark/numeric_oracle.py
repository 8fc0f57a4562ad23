"""Reference eigensolvers used to check the closed-form spectrum.

:func:`jacobi_eigen` is a cyclic-by-row Jacobi method written out here rather
than delegated to LAPACK, so the analytic results are checked against code
that shares nothing with them. numpy is used only as array storage; a stack of
matrices is rotated in lock-step, which keeps large parameter grids cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .constants import CONSTANTS
from .core_model import FieldPoint, MolecularParameters
from .exceptions import NoConvergence, NotSymmetric

SYMMETRY_TOL = 1e-13
CONVERGENCE_TOL = 1e-14
MAX_SWEEPS = 100


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def _off_norm(a):
    off = a * (1.0 - np.eye(a.shape[-1]))
    return np.sqrt(np.einsum("...ij,...ij->...", off, off))


def jacobi_eigen_batch(ms) -> EigenSystem:
    """Diagonalize a stack (..., n, n) of real symmetric matrices."""
    a = np.array(ms, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n))

    norm = np.linalg.norm(a, axis=(-2, -1))
    asym = np.linalg.norm(a - np.swapaxes(a, -1, -2), axis=(-2, -1))
    bad = asym > SYMMETRY_TOL * norm
    if np.any(bad):
        k = int(np.argmax(bad))
        raise NotSymmetric(f"matrix {k} asymmetric: |A - A^T| = {asym[k]:.3e}, |A| = {norm[k]:.3e}")

    # rotate in units of |A| so thresholds are scale free
    safe = np.where(norm > 0, norm, 1.0)
    a = a / safe[:, None, None]
    v = np.broadcast_to(np.eye(n), a.shape).copy()

    for _ in range(MAX_SWEEPS):
        if np.all(_off_norm(a) <= CONVERGENCE_TOL):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                active = apq != 0.0
                if not np.any(active):
                    continue
                denom = np.where(active, 2.0 * apq, 1.0)
                with np.errstate(over="ignore"):
                    tau = (a[:, q, q] - a[:, p, p]) / denom
                    huge = np.abs(tau) > 1e150
                    tau_safe = np.where(huge, 1.0, tau)
                    t = np.where(tau_safe >= 0, 1.0, -1.0) / (
                        np.abs(tau_safe) + np.sqrt(1.0 + tau_safe * tau_safe)
                    )
                # for huge tau, t -> 1/(2 tau)
                t = np.where(huge, 0.5 / np.where(huge, tau, 1.0), t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                cp, cq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = c[:, None] * cp - s[:, None] * cq
                a[:, :, q] = s[:, None] * cp + c[:, None] * cq
                rp, rq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = c[:, None] * rp - s[:, None] * rq
                a[:, q, :] = s[:, None] * rp + c[:, None] * rq
                a[:, p, q] = np.where(active, 0.0, a[:, p, q])
                a[:, q, p] = a[:, p, q]

                vp, vq = v[:, :, p].copy(), v[:, :, q].copy()
                v[:, :, p] = c[:, None] * vp - s[:, None] * vq
                v[:, :, q] = s[:, None] * vp + c[:, None] * vq
    else:
        off = _off_norm(a)
        if np.any(off > CONVERGENCE_TOL):
            raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps (off = {off.max():.3e})")

    values = np.diagonal(a, axis1=-2, axis2=-1) * safe[:, None]
    order = np.argsort(values, axis=-1, kind="stable")
    values = np.take_along_axis(values, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    # deterministic sign: largest-magnitude component of each vector positive
    lead = np.take_along_axis(v, np.abs(v).argmax(axis=-2)[:, None, :], axis=-2)
    v = v * np.where(lead < 0, -1.0, 1.0)
    return EigenSystem(values.reshape(batch_shape + (n,)), v.reshape(batch_shape + (n, n)))


def jacobi_eigen(m) -> EigenSystem:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("jacobi_eigen takes one matrix; use jacobi_eigen_batch for stacks")
    return jacobi_eigen_batch(m)


def residual_norms(m, es: EigenSystem):
    """Frobenius norms of m V - V diag(values) and V^T V - I."""
    m = np.asarray(m)
    v = es.vectors
    defect = np.linalg.norm(m @ v - v * es.values[..., None, :], axis=(-2, -1))
    eye = np.eye(v.shape[-1])
    orth = np.linalg.norm(np.swapaxes(v, -1, -2) @ v - eye, axis=(-2, -1))
    return defect, orth


def collinear_spectrum(p: MolecularParameters, f: FieldPoint) -> np.ndarray:
    """Ascending eigenvalues for parallel or antiparallel fields (theta = 0 or pi).

    With only Jz in the coupling each M sector is a 2x2 block, giving
    -(4/5) mu_B B m +/- sqrt((hbar Delta/2)^2 + ((2/5) mu_e E m)^2).
    """
    if math.sin(f.theta) != 0.0 and not math.isclose(abs(math.cos(f.theta)), 1.0, abs_tol=1e-15):
        raise ValueError(f"collinear formula needs theta in {{0, pi}}, got {f.theta!r}")
    half_gap = 0.5 * CONSTANTS.hbar * p.delta
    out = []
    for m in (1.5, 0.5, -0.5, -1.5):
        shift = -0.8 * CONSTANTS.mu_b * f.b * m
        split = math.hypot(half_gap, 0.4 * p.mu_e * f.e * m)
        out += [shift - split, shift + split]
    return np.sort(np.array(out))
