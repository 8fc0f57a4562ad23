import math

import numpy as np
import pytest

from ohstark.constants import CONSTANTS
from ohstark.core_model import (
    FieldPoint,
    MolecularParameters,
    build_hamiltonian,
    build_kronecker_form,
    convert_energy,
    pauli_matrices,
    spin_matrices,
    stark_term,
)
from ohstark.exceptions import ParameterError, UnitError

from conftest import random_points


def test_jz_diagonal_matches_printed_matrix():
    _, _, jz = spin_matrices(hbar=2.0)
    assert np.array_equal(jz, np.diag([3.0, 1.0, -1.0, -3.0]))


def test_spin_commutator_and_casimir():
    jx, jy, jz = spin_matrices()
    assert np.abs(jx @ jy - jy @ jx - 1j * jz).max() <= 1e-15
    assert np.abs(jy @ jz - jz @ jy - 1j * jx).max() <= 1e-15
    assert np.abs(jz @ jx - jx @ jz - 1j * jy).max() <= 1e-15
    assert np.abs(jx @ jx + jy @ jy + jz @ jz - 15 / 4 * np.eye(4)).max() <= 1e-15


def test_spin_matrices_scale_with_hbar():
    hbar = CONSTANTS.hbar
    jx, jy, jz = spin_matrices(hbar)
    assert np.abs(jx @ jy - jy @ jx - 1j * hbar * jz).max() <= 1e-15 * hbar ** 2


def test_pauli_products():
    sx, sy, sz = pauli_matrices()
    eye = np.eye(2)
    assert np.array_equal(sx @ sx, eye)
    assert np.array_equal(sx @ sy, 1j * sz)
    assert np.array_equal(sx @ sz + sz @ sx, np.zeros((2, 2)))
    # sigma_i sigma_j = delta_ij I + i eps_ijk sigma_k
    s = (sx, sy, sz)
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1
    for i in range(3):
        for j in range(3):
            rhs = (i == j) * eye + 1j * sum(eps[i, j, k] * s[k] for k in range(3))
            assert np.array_equal(s[i] @ s[j], rhs)


def test_zero_field_is_doublet(oh):
    h = build_hamiltonian(oh, FieldPoint(0.0, 0.0, 0.7))
    half = CONSTANTS.hbar * oh.delta / 2
    assert np.array_equal(h, np.diag([-half] * 4 + [half] * 4))


def test_perpendicular_fields_entries(oh):
    f = FieldPoint(0.0, 2e5, math.pi / 2)
    h = build_hamiltonian(oh, f)
    ze = oh.mu_e * f.e
    assert h[0, 5] == pytest.approx(-math.sqrt(3) / 5 * ze, rel=1e-15)
    # cos(pi/2) is 6e-17 in floating point, not zero
    for i, j in [(0, 4), (1, 5), (2, 6), (3, 7)]:
        assert abs(h[i, j]) <= 1e-15 * ze


def test_kronecker_form_matches_explicit(oh, rng):
    for f in random_points(rng, 300):
        h = build_hamiltonian(oh, f)
        k = build_kronecker_form(oh, f)
        assert np.abs(h - k).max() <= 1e-15 * np.abs(h).max()


def test_kronecker_form_special_cases(oh):
    k = build_kronecker_form(oh, FieldPoint(0.0, 0.0))
    half = CONSTANTS.hbar * oh.delta / 2
    assert np.allclose(k, np.diag([-half] * 4 + [half] * 4), rtol=0, atol=1e-16 * half)

    k = build_kronecker_form(oh, FieldPoint(0.0, 3e5, 0.0))
    coupling = k[:4, 4:]
    assert np.array_equal(coupling, np.diag(np.diag(coupling)))


def test_symmetric_trace_free_and_linear(oh, rng):
    for f in random_points(rng, 100):
        h = build_hamiltonian(oh, f)
        assert np.array_equal(h, h.T)
        assert abs(np.trace(h)) <= 1e-15 * np.abs(h).max()
        h0 = build_hamiltonian(oh, FieldPoint(0.0, f.e, f.theta))
        h1 = build_hamiltonian(oh, FieldPoint(1.0, f.e, f.theta))
        assert np.allclose(h, h0 + f.b * (h1 - h0), rtol=0, atol=1e-14 * np.abs(h).max())
        g0 = build_hamiltonian(oh, FieldPoint(f.b, 0.0, f.theta))
        g1 = build_hamiltonian(oh, FieldPoint(f.b, 1.0, f.theta))
        assert np.allclose(h, g0 + f.e * (g1 - g0), rtol=0, atol=1e-14 * np.abs(h).max())


def test_coupling_interpolates_transverse_to_longitudinal(oh):
    jx, _, jz = spin_matrices(CONSTANTS.hbar)
    sx, _, _ = pauli_matrices()
    pref = 2 * oh.mu_e * 1e5 / (5 * CONSTANTS.hbar)
    perp = stark_term(oh, FieldPoint(0.0, 1e5, math.pi / 2))
    para = stark_term(oh, FieldPoint(0.0, 1e5, 0.0))
    scale = np.abs(perp).max()
    assert np.abs(perp - pref * np.kron(sx, -jx)).max() <= 1e-15 * scale
    assert np.abs(para - pref * np.kron(sx, jz)).max() <= 1e-15 * scale


def test_convert_energy():
    half = CONSTANTS.hbar * 2 * math.pi * 1.667e9 / 2
    assert convert_energy(0.0, "K") == 0.0
    assert convert_energy(0.0, "GHz") == 0.0
    assert convert_energy(half, "J") == half
    # h * 1.667 GHz / 2 / k_B with CODATA 2018 values
    expected_k = 6.62607015e-34 * 1.667e9 / 2 / 1.380649e-23
    assert convert_energy(half, "K") == pytest.approx(expected_k, rel=1e-9)
    assert round(convert_energy(half, "K"), 4) == 0.0400
    assert convert_energy(half, "GHz") == pytest.approx(0.8335, rel=1e-14)
    with pytest.raises(UnitError):
        convert_energy(1.0, "eV")


def test_parameter_validation():
    with pytest.raises(ParameterError):
        MolecularParameters(delta=0.0, mu_e=1.0)
    with pytest.raises(ParameterError):
        MolecularParameters(delta=1.0, mu_e=-1.0)
    with pytest.raises(ParameterError):
        FieldPoint(-0.1, 0.0)
    with pytest.raises(ParameterError):
        FieldPoint(0.1, 0.0, 4.0)
    f = FieldPoint.from_lab_units(0.1, 2.0, 180.0)
    assert f.theta == math.pi and f.e == 2e5


def test_constants_pinned():
    assert CONSTANTS.hbar == 1.054571817e-34
    assert CONSTANTS.mu_b == 9.2740100783e-24
    assert CONSTANTS.debye == 3.33564095e-30
    assert CONSTANTS.k_b == 1.380649e-23
    with pytest.raises(Exception):
        CONSTANTS.hbar = 1.0
