import json

import pytest

from qsphere.cli import main
from qsphere.harness import ConfigError, RunConfig, export_decay, export_spectrum, run_suite


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(q=1.5)
    with pytest.raises(ConfigError):
        RunConfig(c="-1")
    with pytest.raises(ConfigError):
        RunConfig(level="0")
    with pytest.raises(ConfigError):
        RunConfig(suite="nope")
    with pytest.raises(ConfigError):
        RunConfig(suite="real", level="20")


def test_tolerance_lookup():
    cfg = RunConfig(tol={"real": 1e-3, "real.j": 1e-6})
    assert cfg.tolerance("real.j", 1.0) == 1e-6
    assert cfg.tolerance("real.abs", 1.0) == 1e-3
    assert cfg.tolerance("algebra.uq_hopf", 1.0) == 1.0


def test_algebra_suite_passes():
    report = run_suite(RunConfig(suite="algebra", level=2))
    assert report.passed
    assert [c.name for c in report.checks] == sorted(c.name for c in report.checks)


def test_report_is_deterministic():
    cfg = dict(suite="heisenberg", level=2, seed=3)
    assert run_suite(RunConfig(**cfg)).to_json() == run_suite(RunConfig(**cfg)).to_json()


def test_grading_obstructed_off_equator():
    report = run_suite(RunConfig(suite="grading", c="1", level=2))
    assert report.passed
    assert [c.name for c in report.checks] == ["grading.obstruction"]
    assert report.notes["grading"] == "obstructed (expected)"


def test_tight_tolerance_fails_honestly():
    report = run_suite(RunConfig(suite="spectral", level=2, tol={"spectral.exponent_su2": 1e-6}))
    assert not report.passed


def test_export_spectrum():
    rows = export_spectrum("D", RunConfig(level=1))
    assert [(r["eigenvalue"], r["multiplicity"], r["sector"]) for r in rows] == [
        (0.5, 2, "0"), (-1.0, 2, "1/2"), (1.0, 6, "1/2")]
    with pytest.raises(ConfigError):
        export_spectrum("X", RunConfig(level=1))


def test_export_decay_meta():
    table = export_decay("A", "B", RunConfig(level=2))
    assert table["meta"]["level"] == "10"
    assert table["meta"]["fitted_ratio"] < 1
    with pytest.raises(ConfigError):
        export_decay("A", "B", RunConfig(c="0"))


def test_cli_json_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["--suite", "algebra", "--level", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["passed"] and data["config"]["suite"] == "algebra"
    assert main(["--suite", "bogus"]) == 1
    assert main(["--q", "2"]) == 1
    assert main(["--suite", "spectral", "--level", "2", "--tol", "spectral.exponent_su2=1e-6"]) == 2


def test_cli_csv_export(capsys):
    assert main(["--export", "Dtilde", "--level", "2", "--format", "csv"]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0] == "eigenvalue,multiplicity,sector"
