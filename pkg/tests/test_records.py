"""Tests for result records and output files."""

import csv
import json
import math

import numpy as np

from casimir_cli.models.results import EnergyResult, SweepRecord
from casimir_cli.utils.records import CSV_COLUMNS, print_json, record_to_dict, write_integrand, write_records


def _records():
    return [
        SweepRecord("d", 1.0, EnergyResult(-0.1, 1e-9, 2e-8, order=12, nodes=64)),
        SweepRecord("d", 2.0, EnergyResult(-0.0125, 1e-10, 0.0, order=12, nodes=128, converged=False)),
    ]


def test_csv_columns_and_rows(tmp_path):
    path = tmp_path / "out" / "energy.csv"
    write_records(_records(), path)
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1] == ["d", "1.0", "-0.1", "1e-09", "2e-08", "12", "64", "true"]
    assert rows[2][-1] == "false"
    assert float(rows[2][2]) == -0.0125


def test_json_records(tmp_path):
    path = tmp_path / "energy.json"
    write_records(_records(), path, "json")
    payload = json.loads(path.read_text())
    assert [p["value"] for p in payload] == [1.0, 2.0]
    assert payload[0]["lmax_used"] == 12
    assert payload[0]["error"] == 1e-9 + 2e-8
    assert payload[1]["converged"] is False


def test_non_finite_values_become_null(capsys):
    record = SweepRecord("d", np.float64(1.0), EnergyResult(math.nan, diagnostics={"beta": np.float64(math.inf)}))
    print_json(record_to_dict(record))
    payload = json.loads(capsys.readouterr().out)
    assert payload["energy"] is None
    assert payload["value"] == 1.0
    assert payload["diagnostics"] == {"beta": None}


def test_integrand_samples(tmp_path):
    path = tmp_path / "integrand.csv"
    write_integrand([(0.5, -0.25, 0.0), (1.0, -0.125, 1e-16)], path)
    lines = path.read_text().splitlines()
    assert lines == ["kappa,logdet,imag", "0.5,-0.25,0.0", "1.0,-0.125,1e-16"]
