import math
import warnings

import numpy as np
import pytest

from ohstark.constants import CONSTANTS
from ohstark.core_model import MolecularParameters, convert_energy
from ohstark.exceptions import ConfigError, RefineGridWarning
from ohstark.sweep import (
    SweepConfig,
    eigen_point,
    run_sweep,
    sweep_from_csv,
    sweep_from_json,
    sweep_to_csv,
    sweep_to_json,
    track_branches,
    write_sweep,
)


@pytest.fixture(scope="module")
def default_sweep():
    return run_sweep(SweepConfig(track_branches=True))


def test_default_sweep_shape_and_symmetry(default_sweep):
    table = default_sweep.eigenvalue_table()
    assert table.shape == (501, 8)
    assert np.all(np.diff(table, axis=1) >= 0)
    assert np.abs(table + table[:, ::-1]).max() <= 1e-10 * np.abs(table).max()
    assert default_sweep.deviations.max() <= 1e-9


def test_zero_field_point_in_kelvin():
    res = run_sweep(SweepConfig(b_steps=1, e_field=0.0))
    half_k = 2 * math.pi * 1.054571817e-34 * 1.667e9 / 2 / 1.380649e-23
    vals = res.records[0].eigenvalues
    assert np.allclose(vals, [-half_k] * 4 + [half_k] * 4, rtol=1e-12, atol=0)
    assert np.allclose(np.round(vals, 4), [-0.04] * 4 + [0.04] * 4)


def test_pure_zeeman_lines_are_linear():
    res = run_sweep(SweepConfig(e_field=0.0, b_steps=51, unit="J", track_branches=True))
    curves = res.branch_curves()
    bs = np.array([r.b for r in res.records])
    half = CONSTANTS.hbar * MolecularParameters.oh().delta / 2
    slopes = []
    for col in curves.T:
        coef = np.polyfit(bs, col, 1)
        assert np.abs(np.polyval(coef, bs) - col).max() <= 1e-10 * half
        slopes.append(coef[0])
    expected = sorted(-4 * CONSTANTS.mu_b * m / 5 for m in (1.5, 0.5, -0.5, -1.5) for _ in (0, 1))
    assert np.allclose(sorted(slopes), expected, rtol=1e-8)


def test_branches_are_permutations(default_sweep):
    ids = default_sweep.branch_table()
    assert ids.shape == (501, 8)
    for row in ids:
        assert sorted(row) == list(range(1, 9))
    assert np.array_equal(ids[0], np.arange(1, 9))


def test_branch_curves_are_continuous(default_sweep):
    curves = default_sweep.branch_curves()
    step = np.abs(np.diff(curves, axis=0)).max()
    # slope bound: 4 mu_B (3/2) / 5 per tesla, in kelvin, times the grid step
    bound = 4 * CONSTANTS.mu_b * 1.5 / 5 / CONSTANTS.k_b * 1e-3
    assert step <= 1.01 * bound


def test_coarse_grid_warns():
    cfg = SweepConfig(b_start=0.0, b_stop=2.0, b_steps=3, e_field=1e6, theta=1.0, track_branches=True)
    with pytest.warns(RefineGridWarning):
        run_sweep(cfg)


def test_track_branches_swaps_crossing_states():
    bs = np.array([0.0, 1.0])
    values = np.array([[-1.0, 1.0], [-1.0, 1.0]])
    vectors = np.array([np.eye(2), np.eye(2)[:, ::-1]])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ids = track_branches(bs, values, vectors)
    assert np.array_equal(ids, [[1, 2], [2, 1]])


def test_csv_round_trip(default_sweep):
    text = sweep_to_csv(default_sweep)
    assert text.splitlines()[0].startswith("b_tesla,e_vpm,theta_rad,ev1")
    back = sweep_from_csv(text)
    assert np.array_equal(back.eigenvalue_table(), default_sweep.eigenvalue_table())
    assert np.array_equal(back.branch_table(), default_sweep.branch_table())
    assert [r.b for r in back.records] == [r.b for r in default_sweep.records]
    assert sweep_to_csv(back) == text


def test_csv_without_branches():
    res = run_sweep(SweepConfig(b_steps=5))
    back = sweep_from_csv(sweep_to_csv(res))
    assert back.branch_table() is None
    assert np.array_equal(back.eigenvalue_table(), res.eigenvalue_table())
    with pytest.raises(ValueError):
        sweep_from_csv("a,b,c\n1,2,3\n")


def test_json_round_trip(default_sweep, tmp_path):
    text = sweep_to_json(default_sweep)
    back = sweep_from_json(text)
    assert np.array_equal(back.eigenvalue_table(), default_sweep.eigenvalue_table())
    assert np.array_equal(back.branch_table(), default_sweep.branch_table())
    write_sweep(default_sweep, tmp_path / "s.json", fmt="json")
    assert (tmp_path / "s.json").read_text() == text


def test_config_validation():
    with pytest.raises(ConfigError):
        SweepConfig(b_steps=0)
    with pytest.raises(ConfigError):
        SweepConfig(b_start=1.0, b_stop=0.5)
    with pytest.raises(ConfigError):
        SweepConfig(unit="eV")
    with pytest.raises(ValueError):
        SweepConfig(theta=4.0)


def test_units_are_consistent():
    cfg_j = SweepConfig(b_steps=11, unit="J")
    cfg_ghz = SweepConfig(b_steps=11, unit="GHz")
    j = run_sweep(cfg_j).eigenvalue_table()
    assert np.allclose(run_sweep(cfg_ghz).eigenvalue_table(), convert_energy(j, "GHz"), rtol=1e-15)


def test_eigen_point_report(oh):
    rep = eigen_point(0.1, 2e5, math.pi / 2, oh)
    assert rep.max_deviation <= 1e-10
    assert rep.anticommutation == 0.0
    assert rep.collinear is None
    text = rep.format()
    assert "E(+3/2,f)" in text and "partner" in text

    rep0 = eigen_point(0.1, 2e5, 0.0, oh, unit="GHz")
    assert np.allclose(rep0.collinear, rep0.eigenvalues, rtol=1e-10, atol=0)
    assert "2x2 block" in rep0.format()
