import json
import subprocess
import sys

import numpy as np
import pytest

from ohstark.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from ohstark.exceptions import RefineGridWarning
from ohstark.sweep import sweep_from_csv


def test_sweep_csv_stdout(capsys):
    assert main(["sweep", "--b-steps", "11"]) == EXIT_OK
    res = sweep_from_csv(capsys.readouterr().out)
    table = res.eigenvalue_table()
    assert table.shape == (11, 8)
    assert np.abs(table + table[:, ::-1]).max() <= 1e-10 * np.abs(table).max()


def test_sweep_json_file(tmp_path):
    out = tmp_path / "sweep.json"
    # 25 mT steps are too coarse near the zero-field crossings
    with pytest.warns(RefineGridWarning):
        code = main(["sweep", "--b-steps", "21", "--track-branches", "--format", "json", "--out", str(out)])
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert len(data) == 21
    assert set(data[0]) == {"b", "eigenvalues", "branches"}
    assert sorted(data[-1]["branches"]) == list(range(1, 9))


def test_eigen_command(capsys):
    assert main(["eigen", "--b", "0.1", "--unit", "GHz"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "max relative deviation" in out
    assert out.count("E(") == 8


def test_evolve_command(capsys):
    assert main(["evolve", "--t-steps", "5"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].split(",")[:2] == ["t_s", "pop1"]
    assert len(lines) == 6
    first = [float(x) for x in lines[1].split(",")]
    assert first[9] == pytest.approx(1.0)  # <sigma_x> of (e1 + e5)/sqrt(2)


def test_evolve_bad_initial(capsys):
    assert main(["evolve", "--initial", "1,2"]) == EXIT_USAGE
    assert "8 amplitudes" in capsys.readouterr().err


def test_verify_passes(capsys):
    assert main(["verify", "--samples", "50"]) == EXIT_OK
    assert "20/20 checks passed" in capsys.readouterr().out


def test_verify_negative_control(capsys):
    assert main(["verify", "--samples", "30", "--corrupt-entry", "0,5"]) == EXIT_FAIL
    assert "[FAIL]" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["verify", "--samples", "0"],
    ["verify", "--corrupt-entry", "x"],
    ["sweep", "--b-steps", "0"],
    ["sweep", "--b-start", "1", "--b-stop", "0"],
    ["eigen", "--b", "-1"],
])
def test_configuration_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error:")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--unit", "eV"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ohstark", "eigen"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "unit = K" in proc.stdout
