"""Tests for material table parsing."""

from pathlib import Path

import pytest
from openpyxl import Workbook

from casimir_cli.data.parser import parse_csv, parse_table
from casimir_cli.data.registry import builtin_material
from casimir_cli.errors import ConfigError
from casimir_cli.physics.materials import MaterialKind, permeability, permittivity


def _write_workbook(path: Path, rows: list[tuple]) -> None:
    wb = Workbook()
    ws = wb.active
    for row in rows:
        ws.append(row)
    wb.save(path)


def test_parse_csv(tmp_path: Path):
    table = tmp_path / "gold.csv"
    table.write_text("kappa,eps\n0.1,900\n1.0,90\n10.0,9\n")

    model = parse_csv(table)
    assert model.kind is MaterialKind.TABULATED
    assert model.name == "gold"
    assert permittivity(model, 1.0) == pytest.approx(90.0)


def test_parse_csv_header_aliases_and_mu(tmp_path: Path):
    table = tmp_path / "ferrite.csv"
    table.write_text("Xi,Epsilon,Mu\n1,4,2\n2,4,3\n")

    model = parse_table(table, name="ferrite")
    assert model.name == "ferrite"
    assert permeability(model, 2.0) == pytest.approx(3.0)


def test_parse_csv_missing_column(tmp_path: Path):
    table = tmp_path / "bad.csv"
    table.write_text("kappa,mu\n1,1\n2,1\n")
    with pytest.raises(ConfigError, match="eps"):
        parse_csv(table)


def test_parse_csv_rejects_unsorted_samples(tmp_path: Path):
    table = tmp_path / "bad.csv"
    table.write_text("kappa,eps\n2,4\n1,4\n")
    with pytest.raises(ConfigError, match="increasing"):
        parse_csv(table)


def test_parse_excel(tmp_path: Path):
    workbook = tmp_path / "silica.xlsx"
    _write_workbook(workbook, [("kappa", "eps"), (0.5, 3.9), (5.0, 3.0), (None, None)])

    model = parse_table(workbook)
    assert model.name == "silica"
    assert permittivity(model, 0.5) == pytest.approx(3.9)
    assert permittivity(model, 5.0) == pytest.approx(3.0)


def test_parse_excel_non_numeric(tmp_path: Path):
    workbook = tmp_path / "bad.xlsx"
    _write_workbook(workbook, [("kappa", "eps"), (0.5, "n/a"), (5.0, 3.0)])
    with pytest.raises(ConfigError, match="non-numeric"):
        parse_table(workbook)


def test_missing_table(tmp_path: Path):
    with pytest.raises(ConfigError, match="does not exist"):
        parse_table(tmp_path / "nowhere.csv")


def test_builtin_material_suggestion():
    assert builtin_material("pec").kind is MaterialKind.PERFECT_CONDUCTOR
    with pytest.raises(ConfigError, match="did you mean 'vacuum'"):
        builtin_material("vaccum")
