import io
import json

import pandas as pd
import pytest

from cli.commands import EXIT_OK, EXIT_USAGE, run_cli


def run(argv, capsys):
    code = run_cli(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_layout_csv(capsys):
    code, out, _ = run(["layout", "-d", "3"], capsys)
    assert code == EXIT_OK
    assert out == "d,chain,data,nonseg,seg,total\n3,0,7,6,0,13\n"


def test_layout_json(capsys):
    code, out, _ = run(["layout", "-d", "13", "--format", "json"], capsys)
    assert code == EXIT_OK
    rows = json.loads(out)
    assert len(rows) == 6
    assert max(row["total"] for row in rows) == 58


def test_usage_errors_exit_one(capsys):
    assert run(["teleport"], capsys)[0] == EXIT_USAGE
    assert run(["evaluate"], capsys)[0] == EXIT_USAGE
    code, _, err = run(["layout", "--format", "xml"], capsys)
    assert code == EXIT_USAGE
    assert "--format" in err


def test_help_exits_zero(capsys):
    code, out, _ = run(["--help"], capsys)
    assert code == EXIT_OK
    assert "sweep" in out


def test_invalid_override_exits_one(capsys):
    code, out, err = run(["evaluate", "--app", "fermi", "--set", "sweep.code_distances=[4]"], capsys)
    assert code == EXIT_USAGE
    assert out == ""
    assert "code_distance" in err


def test_unknown_application_exits_one(capsys):
    code, _, err = run(["evaluate", "--app", "grover"], capsys)
    assert code == EXIT_USAGE
    assert "grover" in err


def test_evaluate_json_document(capsys):
    code, out, _ = run(["evaluate", "--app", "fermi", "--arch", "sdqc", "--format", "json"], capsys)
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["app"] == "fermi-hubbard"
    assert document["scenario"]["n_logical"] == 132
    assert document["scenario"]["improvements"]["lambda"] == 1.0
    assert document["space"]["total"] == 50028 + 84 * (127 + 6)


def test_evaluate_all_architectures_csv(capsys):
    code, out, _ = run(["evaluate", "--app", "fermi", "--arch", "all"], capsys)
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out), keep_default_na=False)
    assert list(frame["arch"]) == ["SDQC", "QCCD", "PhotonicDQC"]
    assert list(frame["space_total"]) == [61200, 50028, 80232]


def test_purify_flag_lowers_transversal_error(capsys):
    _, plain, _ = run(["evaluate", "--app", "fermi", "--format", "json"], capsys)
    _, purified, _ = run(["evaluate", "--app", "fermi", "--purify", "--format", "json"], capsys)
    assert json.loads(purified)["p_trans"] < json.loads(plain)["p_trans"]


def test_sweep_to_file(tmp_path, capsys):
    target = tmp_path / "out" / "sweep.csv"
    code, out, _ = run(
        ["sweep", "--app", "ecdlp", "--arch", "sdqc,qccd", "-d", "11,13", "--lambda", "1,10", "--out", str(target)],
        capsys,
    )
    assert code == EXIT_OK
    assert out == ""
    frame = pd.read_csv(target, keep_default_na=False)
    assert len(frame) == 8
    assert list(frame["lambda"][:2]) == [1.0, 10.0]


def test_sweep_grid_from_config(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"sweep": {"architectures": ["photonic"], "code_distances": [3, 5]}}))
    code, out, _ = run(["sweep", "--app", "fermi", "--config", str(config)], capsys)
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out), keep_default_na=False)
    assert list(zip(frame["arch"], frame["d"])) == [("PhotonicDQC", 3), ("PhotonicDQC", 5)]


def test_config_from_environment(tmp_path, monkeypatch, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"architecture": {"kind": "qccd"}}))
    monkeypatch.setenv("SDQC_COST_CONFIG", str(config))
    code, out, _ = run(["evaluate", "--app", "fermi"], capsys)
    assert code == EXIT_OK
    assert "QCCD" in out


def test_errors_curves(capsys):
    code, out, _ = run(["errors", "--arch", "sdqc", "-d", "13", "--p-grid", "1e-4,1e-3"], capsys)
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out))
    assert len(frame) == 2
    assert list(frame["regime"]) == ["syndrome-dominated", "syndrome-dominated"]

    code, out, _ = run(["errors", "--x", "n_logical", "--arch", "photonic", "--n-logical", "10,10000"], capsys)
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out))
    assert frame["p_trans"].iloc[0] == pytest.approx(frame["p_trans"].iloc[1])


def test_timing_curves(capsys):
    code, out, _ = run(["timing", "--arch", "qccd", "--n-logical", "2,132"], capsys)
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out))
    assert list(frame["n_logical"]) == [2, 132]

    code, out, _ = run(["timing", "--curve", "photonic-cdf", "--t-max", "8000", "--points", "3"], capsys)
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out))
    assert list(frame["t_us"]) == [0.0, 4000.0, 8000.0]


def test_frontier(capsys):
    code, out, _ = run(["frontier", "--app", "fermi", "--arch", "sdqc", "-d", "13", "--target", "0.9"], capsys)
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out), keep_default_na=False)
    assert 0.1 < float(frame["lambda_star"].iloc[0]) < 1.0
