"""Closed-form eigenvalues of the Stark-Zeeman matrix.

The characteristic polynomial is even, so it is a quartic in x = lambda**2:

    x**4 + p6 x**3 + p4 x**2 + p2 x + p0 = 0

whose roots are ``-p6/4 +/- sqrt(g1)/2 +/- sqrt(g2 +/- g3)/2`` with the
intermediates ``h1, h2, h3, g1, g2, g3`` defined in :func:`quartic_intermediates`.
In the generic case (three real resolvent roots) ``h3`` is the cube root of a
complex number, so the evaluation runs in complex arithmetic.

The formulas lose about half the working digits at double roots (B = 0 gives
pairwise-degenerate lambda**2) and at lambda = 0 crossings. Everything is
therefore evaluated in 256-bit binary floating point through gmpy2, starting
from the field inputs, and rounded to double only at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import gmpy2
from gmpy2 import mpc, mpfr
import numpy as np

from .charpoly import even_coefficients_from_cosines
from .constants import CONSTANTS
from .core_model import FieldPoint, MolecularParameters
from .exceptions import ImaginaryResidue, NegativeRoot

PRECISION = 256
IMAG_TOL = 1e-9
# rounding the coefficients to double splits a k-fold root into a complex
# cluster of relative size eps**(1/k); k = 4 gives about 1e-4
COEFF_IMAG_TOL = 1e-3
NEGATIVE_TOL = 1e-12


class Label(NamedTuple):
    m: Fraction
    parity: str

    def __str__(self):
        sign = "+" if self.m > 0 else "-"
        return f"E({sign}{abs(self.m)},{self.parity})"


HALF, THREE_HALVES = Fraction(1, 2), Fraction(3, 2)

# (positive branch, negative partner) for the four lambda**2 roots, in the
# order (+sqrt g1, +), (+sqrt g1, -), (-sqrt g1, +), (-sqrt g1, -)
ROOT_LABELS = (
    (Label(THREE_HALVES, "f"), Label(-THREE_HALVES, "e")),
    (Label(THREE_HALVES, "e"), Label(-THREE_HALVES, "f")),
    (Label(HALF, "f"), Label(-HALF, "e")),
    (Label(HALF, "e"), Label(-HALF, "f")),
)


@dataclass(frozen=True)
class QuarticIntermediates:
    h1: complex
    h2: complex
    h3: complex
    g1: complex
    g2: complex
    g3: complex


@dataclass(frozen=True)
class Spectrum:
    """Eight eigenvalues (J, ascending) with formula labels and +/- partners.

    ``roots`` holds the four lambda**2 roots (J**2) in formula order;
    ``pairing`` lists index pairs (i, j) into ``eigenvalues`` with
    eigenvalues[i] = -eigenvalues[j].
    """

    eigenvalues: np.ndarray
    labels: tuple
    pairing: tuple
    roots: np.ndarray
    eigenvectors: np.ndarray | None = None

    def label_of(self, i: int) -> Label:
        return self.labels[i]

    def value_of(self, label: Label) -> float:
        return float(self.eigenvalues[self.labels.index(label)])


def _context():
    return gmpy2.context(gmpy2.get_context(), precision=PRECISION)


def _root_scale(p0, p2, p4, p6):
    """Bound on the size of the lambda**2 roots, from the coefficient magnitudes."""
    return max(abs(p6), gmpy2.root(abs(p4), 2), gmpy2.root(abs(p2), 3), gmpy2.root(abs(p0), 4))


def _intermediates(p0, p2, p4, p6, scale):
    """Return (h1, h2, h3, g1, g2, g3) in working precision; h3 is None when h1 = h2 = 0."""
    eps = mpfr(2) ** (-PRECISION)
    h2 = 12 * p0 + p4 * p4 - 3 * p2 * p6
    h1 = 27 * p2 * p2 - 72 * p0 * p4 + 2 * p4 ** 3 - 9 * p2 * p4 * p6 + 27 * p0 * p6 * p6

    # h1 = h2 = 0 means a triple (or fourfold) root; the cube-root terms are 0/0
    # there and their limit is zero
    h3 = None
    cube_terms = mpc(0)
    tiny = eps ** mpfr(0.75)
    if abs(h2) > tiny * scale ** 4 or abs(h1) > tiny * scale ** 6:
        sq = gmpy2.sqrt(mpc(h1 * h1 - 4 * h2 ** 3))
        u, w = h1 + sq, h1 - sq
        # either sign gives a valid cube root; the larger one avoids cancellation
        radicand = w if abs(w) > abs(u) else u
        if radicand.imag == 0:
            # real radicand: the real cube root keeps g1 real
            h3 = mpc(gmpy2.cbrt(radicand.real))
        else:
            h3 = radicand ** (mpfr(1) / 3)
        if h3 == 0:
            h3 = None
        else:
            c2 = gmpy2.cbrt(mpfr(2))
            cube_terms = c2 * h2 / (3 * h3) + h3 / (3 * c2)

    g1 = -2 * p4 / 3 + p6 * p6 / 4 + cube_terms
    g2 = -4 * p4 / 3 + p6 * p6 / 2 - cube_terms

    # g1 stays complex; only the final roots are tested for an imaginary residue
    sg1 = gmpy2.sqrt(mpc(g1))
    if abs(sg1) <= gmpy2.sqrt(eps) * scale:
        g3 = mpc(0)
    else:
        g3 = (-8 * p2 + 4 * p4 * p6 - p6 ** 3) / (4 * sg1)
    return h1, h2, h3, mpc(g1), mpc(g2), mpc(g3)


def _quartic_roots(p0, p2, p4, p6, imag_tol=IMAG_TOL):
    """Four lambda**2 roots (mpfr, formula order) from mpfr coefficients."""
    scale = _root_scale(p0, p2, p4, p6)
    if scale == 0:
        return [mpfr(0)] * 4
    _, _, _, g1, g2, g3 = _intermediates(p0, p2, p4, p6, scale)
    centre = -p6 / 4

    sg1 = gmpy2.sqrt(g1)
    r_plus = gmpy2.sqrt(g2 + g3)
    r_minus = gmpy2.sqrt(g2 - g3)
    raw = [
        centre + sg1 / 2 + r_plus / 2,
        centre + sg1 / 2 - r_plus / 2,
        centre - sg1 / 2 + r_minus / 2,
        centre - sg1 / 2 - r_minus / 2,
    ]
    roots = []
    for z in raw:
        if abs(z.imag) > imag_tol * scale:
            raise ImaginaryResidue(f"lambda^2 root {complex(z)!r} has imaginary residue above tolerance")
        x = z.real
        if x < -NEGATIVE_TOL * scale:
            raise NegativeRoot(f"lambda^2 root {float(x)!r} < 0 (scale {float(scale):.3e})")
        roots.append(max(x, mpfr(0)))
    return roots


def quartic_intermediates(p0, p2, p4, p6) -> QuarticIntermediates:
    """The intermediates g1..g3, h1..h3 for the given even coefficients.

    Raises ``ZeroDivisionError`` where h1 = h2 = 0 (a triple or fourfold
    root), since h3 is then undefined.
    """
    with _context():
        cs = [mpfr(v) for v in (p0, p2, p4, p6)]
        h1, h2, h3, g1, g2, g3 = _intermediates(*cs, _root_scale(*cs))
        if h3 is None:
            raise ZeroDivisionError("h1 = h2 = 0: h3 is undefined at a triple root")
        return QuarticIntermediates(*(complex(v) for v in (h1, h2, h3, g1, g2, g3)))


def solve_quartic_in_lambda_sq(p0, p2, p4, p6, imag_tol: float = COEFF_IMAG_TOL):
    """Four lambda**2 roots as floats, ordered (++, +-, -+, --) by branch signs.

    The coefficients are taken as exact binary values and the formulas are
    evaluated at :data:`PRECISION` bits. Roots whose imaginary part is below
    ``imag_tol`` times the root scale are accepted as real, which absorbs the
    splitting of double roots caused by rounding the coefficients.
    """
    with _context():
        return [float(x) for x in _quartic_roots(*(mpfr(v) for v in (p0, p2, p4, p6)), imag_tol=imag_tol)]


def _spectrum_roots(p: MolecularParameters, f: FieldPoint):
    """lambda**2 roots in units of (hbar Delta)**2, evaluated from the field inputs."""
    with _context():
        unit = mpfr(CONSTANTS.hbar) * mpfr(p.delta)
        b_t = 4 * mpfr(CONSTANTS.mu_b) * mpfr(f.b) / unit
        e_t = 2 * mpfr(p.mu_e) * mpfr(f.e) / unit
        d_t = mpfr(5)
        theta = mpfr(f.theta)
        coeffs = even_coefficients_from_cosines(b_t, e_t, d_t, gmpy2.cos(2 * theta), gmpy2.cos(4 * theta))
        roots = _quartic_roots(*coeffs)
        return [float(x) for x in roots], [float(gmpy2.sqrt(x)) for x in roots]


def solve_spectrum(p: MolecularParameters, f: FieldPoint, eigenvectors: bool = False) -> Spectrum:
    """Analytic spectrum at one field point.

    With ``eigenvectors=True`` the Jacobi eigenvectors of the explicit matrix
    are attached in the same ascending order.
    """
    unit = p.energy_scale
    roots, positive = _spectrum_roots(p, f)

    values, labels = [], []
    for lam, (plus, minus) in zip(positive, ROOT_LABELS):
        values += [lam * unit, -lam * unit]
        labels += [plus, minus]
    order = np.argsort(values, kind="stable")
    eig = np.array(values)[order]
    labels = tuple(labels[k] for k in order)
    where = {orig: pos for pos, orig in enumerate(order)}
    pairing = tuple(sorted((where[2 * k + 1], where[2 * k]) for k in range(4)))

    vectors = None
    if eigenvectors:
        from .core_model import build_hamiltonian
        from .numeric_oracle import jacobi_eigen

        vectors = jacobi_eigen(build_hamiltonian(p, f)).vectors
    return Spectrum(eig, labels, pairing, np.array(roots) * unit ** 2, vectors)


def solve_spectra(p: MolecularParameters, b, e, theta) -> np.ndarray:
    """Ascending analytic eigenvalues (J) for arrays of field values; shape (n, 8)."""
    b, e, theta = np.broadcast_arrays(np.asarray(b, float), np.asarray(e, float), np.asarray(theta, float))
    out = np.empty(b.shape + (8,))
    unit = p.energy_scale
    for idx in np.ndindex(b.shape):
        _, lam = _spectrum_roots(p, FieldPoint(float(b[idx]), float(e[idx]), float(theta[idx])))
        lam = np.array(lam) * unit
        out[idx] = np.sort(np.concatenate([-lam, lam]))
    return out
