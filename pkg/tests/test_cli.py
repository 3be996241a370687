import csv
import json

import pytest

from hfgen.commands.common import parse_forms, parse_modes, parse_pairs
from hfgen.core.errors import ConfigError
from hfgen.main import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, join_list_values, main
from hfgen.models.experiment import Form


def _rows(path):
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    return list(csv.DictReader(lines[1:]))


def test_parse_modes():
    assert parse_modes("-2..2") == [-2, -1, 0, 1, 2]
    assert parse_modes("0,1,3") == [0, 1, 3]
    assert parse_modes("3,0..1,1") == [0, 1, 3]
    for bad in ("", "a..b", "2..-2", "1.5"):
        with pytest.raises(ConfigError):
            parse_modes(bad)


def test_parse_pairs_and_forms():
    assert parse_pairs("0:1, 1:2") == [(0, 1), (1, 2)]
    assert parse_forms("differential,offdiag") == [Form.DIFFERENTIAL, Form.OFFDIAG]
    with pytest.raises(ConfigError):
        parse_pairs("0-1")
    with pytest.raises(ConfigError):
        parse_forms("differential,spectral")


def test_rotor_pass(tmp_path, capsys):
    out = tmp_path / "rotor.csv"
    code = main([
        "rotor", "--gauge", "b", "--epsilon", "0.3", "--modes=-1..1", "--grid", "128",
        "--tolerance", "1e-2", "--out", str(out),
    ])
    assert code == EXIT_OK
    assert "✅ PASS rotor-b differential" in capsys.readouterr().out
    assert len(_rows(out)) == 3


def test_join_list_values():
    assert join_list_values(["rotor", "--modes", "-2..2", "--pairs", "-1:0"]) == [
        "rotor", "--modes=-2..2", "--pairs=-1:0",
    ]
    assert join_list_values(["--modes", "0,1", "--out", "x.csv"]) == ["--modes", "0,1", "--out", "x.csv"]
    assert join_list_values(["--modes", "--grid", "64"]) == ["--modes", "--grid", "64"]
    assert join_list_values(["--modes"]) == ["--modes"]


def test_negative_mode_range_as_separate_argument(tmp_path, capsys):
    out = tmp_path / "rotor.csv"
    code = main([
        "rotor", "--gauge", "b", "--epsilon", "0.25", "--modes", "-2..2", "--grid", "256",
        "--fd-step", "1e-5", "--forms", "differential", "--tolerance", "1e-2", "--out", str(out),
    ])
    assert code == EXIT_OK
    assert "✅ PASS rotor-b differential" in capsys.readouterr().out
    assert [int(row["n"]) for row in _rows(out)] == [-2, -1, 0, 1, 2]


@pytest.mark.slow
def test_reference_rotor_run(tmp_path, capsys):
    out = tmp_path / "rotor.csv"
    code = main([
        "rotor", "--gauge", "b", "--epsilon", "0.25", "--modes", "-2..2", "--grid", "2048",
        "--fd-step", "1e-5", "--forms", "differential", "--out", str(out),
    ])
    assert code == EXIT_OK
    assert "✅ PASS rotor-b differential" in capsys.readouterr().out
    for row in _rows(out):
        n = int(row["n"])
        assert float(row["residual_naive"]) == pytest.approx(abs(0.25 - n), abs=1e-4)
        assert float(row["residual_generalized"]) <= 1e-4


def test_rotor_trivial_flux(tmp_path):
    out = tmp_path / "rotor_a.csv"
    assert main(["rotor", "--gauge", "a", "--epsilon", "0", "--modes", "0", "--grid", "64", "--out", str(out)]) == EXIT_OK
    row = _rows(out)[0]
    assert abs(float(row["dE_dlambda"])) < 1e-7
    assert abs(float(row["delta_matrix"])) < 1e-8


def test_config_file_overrides_flags(tmp_path):
    out = tmp_path / "rotor.csv"
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"grid_size": 64, "modes": [0, 1]}), encoding="utf-8")
    code = main([
        "rotor", "--gauge", "b", "--epsilon", "0.3", "--grid", "128", "--tolerance", "1e-2",
        "--out", str(out), "--config", str(config),
    ])
    assert code == EXIT_OK
    rows = _rows(out)
    assert [int(row["grid_size"]) for row in rows] == [64, 64]
    assert [int(row["n"]) for row in rows] == [0, 1]


def test_config_file_sweep_replaces_flag_parameter(tmp_path):
    out = tmp_path / "rotor.csv"
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"sweep": {"start": 0.1, "stop": 0.2, "count": 2}}), encoding="utf-8")
    code = main([
        "rotor", "--gauge", "b", "--epsilon", "0.3", "--grid", "64", "--tolerance", "1e-2",
        "--out", str(out), "--config", str(config),
    ])
    assert code == EXIT_OK
    assert [float(row["lambda"]) for row in _rows(out)] == [0.1, 0.2]


@pytest.mark.parametrize("argv", [
    ["rotor", "--gauge", "b", "--epsilon", "0.5", "--modes", "0"],
    ["rotor", "--gauge", "b", "--epsilon", "0.3", "--modes", "x"],
    ["rotor", "--gauge", "b", "--epsilon", "0.3", "--grid", "4"],
    ["rotor", "--gauge", "b"],
    ["radial", "--kappa", "-1"],
    ["convergence", "--model", "rotor-b", "--lambda", "0.25", "--levels", "2"],
    ["integrated", "--model", "radial", "--lambda1", "1.0", "--lambda2", "1.5", "--analytic"],
])
def test_configuration_errors(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path / "x.csv")]) == EXIT_CONFIG
    assert "❌ invalid configuration" in capsys.readouterr().out


def test_unreadable_config_file(tmp_path, capsys):
    code = main(["rotor", "--gauge", "b", "--epsilon", "0.3", "--config", str(tmp_path / "missing.json")])
    assert code == EXIT_CONFIG


def test_numerical_failure(tmp_path, capsys):
    code = main([
        "radial", "--kappa", "1.0", "--r-min", "0.5", "--grid", "64", "--out", str(tmp_path / "radial.csv"),
    ])
    assert code == EXIT_NUMERICAL
    assert "❌ numerical failure" in capsys.readouterr().out


def test_radial(tmp_path, capsys):
    out = tmp_path / "radial.csv"
    assert main(["radial", "--kappa", "1", "--grid", "1000", "--tolerance", "5e-2", "--out", str(out)]) == EXIT_OK
    assert "✅ PASS radial differential" in capsys.readouterr().out
    row = _rows(out)[0]
    assert row["model"] == "radial-log"
    assert float(row["dE_dlambda"]) == pytest.approx(-1.0, abs=2e-2)
    assert float(row["delta_boundary"]) == pytest.approx(-1.0, abs=1e-6)


def test_offdiag_analytic(tmp_path, capsys):
    out = tmp_path / "offdiag.csv"
    code = main([
        "offdiag", "--model", "rotor-b", "--lambda", "0.25", "--pairs", "0:1,0:2,1:2", "--analytic",
        "--out", str(out),
    ])
    assert code == EXIT_OK
    assert "✅ PASS rotor-b offdiag" in capsys.readouterr().out
    assert len(_rows(out)) == 3


def test_integrated_analytic(tmp_path, capsys):
    out = tmp_path / "integrated.csv"
    code = main([
        "integrated", "--model", "rotor-b", "--lambda1", "0.25", "--lambda2", "0.1", "--analytic",
        "--out", str(out),
    ])
    assert code == EXIT_OK
    assert "✅ PASS rotor-b integrated" in capsys.readouterr().out
    row = _rows(out)[0]
    assert row["route"] == "analytic"
    assert float(row["residual"]) <= 1e-10


def test_convergence(tmp_path):
    out = tmp_path / "convergence.csv"
    code = main([
        "convergence", "--model", "rotor-b", "--lambda", "0.25", "--modes", "0", "--grid", "32",
        "--levels", "3", "--out", str(out),
    ])
    assert code == EXIT_OK
    rows = _rows(out)
    assert [int(row["grid_size"]) for row in rows] == [32, 64, 128]
    assert rows[0]["energy_order"] == ""
    assert 1.8 <= float(rows[2]["energy_order"]) <= 2.2


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["spectrum"])
