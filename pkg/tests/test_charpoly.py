import math

import numpy as np
import pytest

from ohstark.charpoly import (
    ScaledVariables,
    charpoly_oracle,
    coefficient_scale,
    even_coefficients,
    odd_residual,
    scale_variables,
)
from ohstark.constants import CONSTANTS
from ohstark.core_model import FieldPoint, build_hamiltonian

from conftest import random_points


def test_scale_variables(oh):
    s = scale_variables(oh, FieldPoint(0.0, 2e5))
    assert s.b_t == 0.0
    assert s.d_t == pytest.approx(5 * 1.054571817e-34 * 2 * math.pi * 1.667e9, rel=1e-15)
    assert s.d_t == pytest.approx(5.522e-24, rel=1e-3)
    assert s.e_t == 2 * (1.66 * 3.33564095e-30) * 2e5


def test_identity_gives_binomial_coefficients():
    c = charpoly_oracle(np.eye(8))
    binom = [math.comb(8, k) * (-1) ** (8 - k) for k in range(9)]
    assert np.array_equal(c, binom)


def test_diagonal_one_to_eight():
    c = charpoly_oracle(np.diag(np.arange(1.0, 9.0)))
    # prod (lambda - k), expanded independently
    expected = np.polynomial.polynomial.polyfromroots(np.arange(1, 9))
    assert np.array_equal(c, expected)
    assert c[0] == 40320


def test_odd_dimension_sign():
    c = charpoly_oracle(np.diag([2.0, 3.0, 5.0]))
    # det(m - lambda I) = -(lambda - 2)(lambda - 3)(lambda - 5)
    assert np.array_equal(c, -np.polynomial.polynomial.polyfromroots([2, 3, 5]))


def test_batched_oracle_matches_single(oh, rng):
    hs = np.array([build_hamiltonian(oh, f) / oh.energy_scale for f in random_points(rng, 5)])
    batch = charpoly_oracle(hs)
    for h, row in zip(hs, batch):
        assert np.array_equal(charpoly_oracle(h), row)


def test_zero_field_closed_forms():
    d = 5.0
    p0, p2, p4, p6 = even_coefficients(ScaledVariables(0.0, 0.0, d, 0.3))
    assert p0 == pytest.approx(d ** 8 / 1e8) and p0 == pytest.approx(0.5 ** 8)
    assert p6 == pytest.approx(-(d ** 2) / 25) and p6 == pytest.approx(-1.0)
    # fourfold lambda^2 = 1/4: (x - 1/4)^4
    assert p2 == pytest.approx(-4 * 0.25 ** 3)
    assert p4 == pytest.approx(6 * 0.25 ** 2)


def test_odd_coefficients_vanish(oh, rng):
    hs = np.array([build_hamiltonian(oh, f) / oh.energy_scale for f in random_points(rng, 500)])
    assert odd_residual(charpoly_oracle(hs)).max() <= 1e-12


def test_closed_form_matches_oracle(oh, rng):
    u = oh.energy_scale
    for f in random_points(rng, 300):
        h = build_hamiltonian(oh, f) / u
        c = charpoly_oracle(h)
        sigma = np.linalg.norm(h) / math.sqrt(8)
        closed = even_coefficients(scale_variables(oh, f).rescaled(u))
        for k, val in zip((0, 2, 4, 6), closed):
            assert abs(val - c[k]) <= 1e-10 * max(abs(c[k]), sigma ** (8 - k))
        # degree-8 monic convention: p0 = det(H)
        assert c[0] == pytest.approx(np.linalg.det(h), rel=1e-10, abs=1e-10 * sigma ** 8)


def test_perpendicular_substitution():
    b, e, d = 3.1, 1.7, 5.0
    direct = even_coefficients(ScaledVariables(b, e, d, math.pi / 2))
    from ohstark.charpoly import even_coefficients_from_cosines

    substituted = even_coefficients_from_cosines(b, e, d, -1.0, 1.0)
    assert np.allclose(direct, substituted, rtol=1e-14, atol=0)


def test_theta_supplement_symmetry(rng):
    for _ in range(50):
        b, e = rng.uniform(0, 20, 2)
        t = rng.uniform(0, math.pi)
        a = even_coefficients(ScaledVariables(b, e, 5.0, t))
        c = even_coefficients(ScaledVariables(b, e, 5.0, math.pi - t))
        assert np.allclose(a, c, rtol=1e-12, atol=0)


def test_even_coefficients_broadcast():
    b = np.array([0.0, 1.0, 2.0])
    out = even_coefficients(ScaledVariables(b, 0.5, 5.0, np.array([0.1, 0.2, 0.3])))
    assert all(np.shape(x) == (3,) for x in out)


def test_coefficient_scale_floor():
    assert coefficient_scale(np.zeros(9)) == 1.0
