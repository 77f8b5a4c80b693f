"""Tests for the command-line interface."""

import csv
import json
import math
from pathlib import Path

import pytest
from click.testing import CliRunner

from casimir_cli import checks, cli
from casimir_cli.cli import main
from casimir_cli.errors import DeterminantError

PEC_PLATES = -(math.pi**2) / 720


@pytest.fixture(autouse=True)
def isolated_config(tmp_path: Path, monkeypatch):
    monkeypatch.setattr("casimir_cli.config.CONFIG_DIR", tmp_path / "cfg")
    monkeypatch.setattr("casimir_cli.config.CONFIG_FILE", tmp_path / "cfg" / "config.toml")
    monkeypatch.setenv("CASIMIR_THREADS", "1")


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _write(tmp_path: Path, data: dict, name: str = "run.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _plates(**extra) -> dict:
    return {"geometry": {"variant": "parallel_plates", "d": 1.0}, **extra}


def test_energy_writes_csv(runner, tmp_path):
    out = tmp_path / "results" / "plates.csv"
    config = _write(tmp_path, _plates())
    result = runner.invoke(main, ["energy", "--config", config, "--out", str(out)])
    assert result.exit_code == 0, result.output
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 1
    assert rows[0]["sweep_param"] == "d"
    assert float(rows[0]["energy"]) == pytest.approx(PEC_PLATES, rel=1e-8)


def test_energy_json(runner, tmp_path):
    config = _write(tmp_path, _plates(length_unit="nm"))
    result = runner.invoke(main, ["--json", "energy", "--config", config])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["geometry"] == "parallel_plates"
    assert payload["length_unit"] == "nm"
    assert payload["records"][0]["energy"] == pytest.approx(PEC_PLATES, rel=1e-8)
    assert payload["records"][0]["per_unit"] == "area"


def test_sweep_keeps_grid_order(runner, tmp_path):
    out = tmp_path / "sweep.json"
    config = _write(tmp_path, _plates(sweep={"parameter": "d", "values": [2.0, 1.0, 3.0]}))
    result = runner.invoke(main, ["sweep", "--config", config, "--out", str(out), "--format", "json"])
    assert result.exit_code == 0, result.output
    records = json.loads(out.read_text())
    assert [r["value"] for r in records] == [2.0, 1.0, 3.0]
    for r in records:
        assert r["energy"] == pytest.approx(PEC_PLATES / r["value"] ** 3, rel=1e-8)


def test_sweep_needs_sweep_section(runner, tmp_path):
    config = _write(tmp_path, _plates())
    result = runner.invoke(main, ["sweep", "--config", config])
    assert result.exit_code == 1
    assert "sweep" in result.output


@pytest.mark.slow
def test_sphere_plate_sweep_csv(runner, tmp_path):
    out = tmp_path / "sphere.csv"
    data = {
        "geometry": {"variant": "sphere_plate", "radius": 1.0, "d": 4.0},
        "numerics": {"rtol": 1e-4, "lmax_cap": 12},
        "sweep": {"parameter": "d", "start": 4.0, "stop": 100.0, "num": 12, "spacing": "log"},
    }
    config = _write(tmp_path, data)
    result = runner.invoke(main, ["sweep", "--config", config, "--out", str(out)])
    assert result.exit_code == 0, result.output
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 12
    assert float(rows[0]["value"]) == pytest.approx(4.0)
    assert float(rows[-1]["value"]) == pytest.approx(100.0)
    magnitudes = [abs(float(r["energy"])) for r in rows]
    assert all(float(r["energy"]) < 0 for r in rows)
    assert all(a > b for a, b in zip(magnitudes, magnitudes[1:]))


def test_two_atoms_sweep_over_transition_length(runner, tmp_path):
    out = tmp_path / "atoms.json"
    alpha0 = 1e-6
    data = {
        "geometry": {"variant": "two_atoms", "d": 1.0, "alpha0": alpha0, "d10": 1.0, "mode": "quadratic"},
        "sweep": {"parameter": "d10", "start": 1e-3, "stop": 1e3, "num": 7, "spacing": "log"},
    }
    config = _write(tmp_path, data)
    result = runner.invoke(main, ["sweep", "--config", config, "--out", str(out), "--format", "json"])
    assert result.exit_code == 0, result.output
    records = json.loads(out.read_text())
    assert len(records) == 7
    assert all(r["sweep_param"] == "d10" for r in records)
    energies = [r["energy"] for r in records]
    assert all(e < 0 for e in energies)
    assert all(abs(a) >= abs(b) for a, b in zip(energies, energies[1:]))
    # retarded end, then the London end where E d10 is fixed
    assert energies[0] / alpha0**2 == pytest.approx(-23 / (4 * math.pi), rel=0.01)
    assert energies[-1] * records[-1]["value"] / alpha0**2 == pytest.approx(-0.75, rel=0.01)


def test_failing_point_keeps_completed_records(runner, tmp_path, monkeypatch):
    evaluate_point = cli._evaluate_point

    def failing_at_three(config, geometry, *args):
        if geometry.d == 3.0:
            raise DeterminantError("I - N is singular")
        return evaluate_point(config, geometry, *args)

    monkeypatch.setattr(cli, "_evaluate_point", failing_at_three)
    out = tmp_path / "partial.csv"
    config = _write(tmp_path, _plates(sweep={"parameter": "d", "values": [1.0, 2.0, 3.0]}))
    result = runner.invoke(main, ["sweep", "--config", config, "--out", str(out)])
    assert result.exit_code == 4
    assert "singular" in result.output
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert [float(r["value"]) for r in rows] == [1.0, 2.0]


def test_float_overflow_is_a_numerical_failure(runner, tmp_path, monkeypatch):
    def overflowing(*args):
        raise OverflowError("math range error")

    monkeypatch.setattr(cli, "_evaluate_point", overflowing)
    result = runner.invoke(main, ["energy", "--config", _write(tmp_path, _plates())])
    assert result.exit_code == 4
    assert not isinstance(result.exception, OverflowError)
    assert "math range error" in result.output


def test_check_suite_that_raises_fails(runner, monkeypatch):
    def overflowing():
        raise OverflowError("math range error")

    monkeypatch.setattr(checks, "SUITES", {"broken": overflowing})
    result = runner.invoke(main, ["check", "broken"])
    assert result.exit_code == 4
    assert "FAIL" in result.output


def test_bad_config_exits_1(runner, tmp_path):
    config = _write(tmp_path, {"geometry": {"variant": "sphere_plate", "radius": 2.0, "d": 1.0}})
    result = runner.invoke(main, ["--json", "energy", "--config", config])
    assert result.exit_code == 1
    assert json.loads(result.stdout)["type"] == "GeometryError"

    config = _write(tmp_path, {"geometry": {"variant": "parallel_plates"}}, "broken.json")
    result = runner.invoke(main, ["energy", "--config", config])
    assert result.exit_code == 1
    assert "geometry.parallel_plates.d" in result.output


def test_unconverged_points_exit_3(runner, tmp_path):
    out = tmp_path / "atoms.csv"
    data = {
        "geometry": {"variant": "two_atoms", "d": 1.0, "alpha0": 0.05, "d10": 0.5, "mode": "general"},
        "numerics": {"initial_nodes": 2, "max_levels": 1, "rtol": 1e-14},
        "output": {"path": str(out)},
    }
    config = _write(tmp_path, data)
    result = runner.invoke(main, ["energy", "--config", config])
    assert result.exit_code == 3
    assert "false" in out.read_text()

    result = runner.invoke(main, ["energy", "--config", config, "--strict"])
    assert result.exit_code == 3


def test_force(runner, tmp_path):
    config = _write(tmp_path, _plates())
    result = runner.invoke(main, ["--json", "force", "--config", config])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["force"] == pytest.approx(3 * PEC_PLATES, rel=1e-6)


def test_integrand(runner, tmp_path):
    out = tmp_path / "integrand.csv"
    config = _write(tmp_path, {"geometry": {"variant": "two_atoms", "d": 1.0, "alpha0": 0.05, "d10": 0.5}})
    result = runner.invoke(
        main, ["--json", "integrand", "--config", config, "--kappa", "0.5", "--kappa", "2.0", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    samples = json.loads(result.stdout)["samples"]
    assert [s["kappa"] for s in samples] == [0.5, 2.0]
    assert all(s["logdet"] < 0 for s in samples)
    assert out.read_text().splitlines()[0] == "kappa,logdet,imag"


def test_check_unknown_suite_is_usage_error(runner):
    result = runner.invoke(main, ["check", "lifshits"])
    assert result.exit_code == 2
    assert "lifshitz" in result.output


def test_check_suite_json(runner):
    result = runner.invoke(main, ["--json", "check", "lifshitz"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["passed"] is True
    assert payload["checks"]


def test_schema(runner):
    result = runner.invoke(main, ["schema"])
    assert result.exit_code == 0
    assert "parallel_plates" in result.output
    json.loads(result.output)


def test_materials_lists_builtins_and_config(runner, tmp_path):
    config = _write(tmp_path, _plates(materials={"glass": {"kind": "constant", "eps0": 2.25}}))
    result = runner.invoke(main, ["--json", "materials", "--config", config])
    assert result.exit_code == 0, result.output
    names = {row["name"]: row for row in json.loads(result.stdout)}
    assert {"vacuum", "pec", "glass"} <= set(names)
    assert names["glass"]["kind"] == "constant"


def test_defaults_set_show_clear(runner):
    assert runner.invoke(main, ["defaults", "set", "rtol", "1e-7"]).exit_code == 0
    shown = json.loads(runner.invoke(main, ["--json", "defaults", "show"]).stdout)
    assert shown["rtol"] == 1e-7
    assert shown["threads"] is None

    assert runner.invoke(main, ["defaults", "clear", "rtol"]).exit_code == 0
    shown = json.loads(runner.invoke(main, ["--json", "defaults", "show"]).stdout)
    assert shown["rtol"] is None


def test_defaults_reject_bad_values(runner):
    result = runner.invoke(main, ["defaults", "set", "length_unit", "furlong"])
    assert result.exit_code == 1
    result = runner.invoke(main, ["defaults", "set", "colour", "red"])
    assert result.exit_code == 1
