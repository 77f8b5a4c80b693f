"""Parse tabulated material responses from CSV or Excel files."""

from pathlib import Path
from typing import Any

import numpy as np
from openpyxl import load_workbook
from openpyxl.worksheet.worksheet import Worksheet

from ..errors import ConfigError
from ..physics.materials import MaterialModel, tabulated

COLUMN_MAP: dict[str, str] = {
    "kappa": "kappa",
    "k": "kappa",
    "xi": "kappa",
    "eps": "eps",
    "epsilon": "eps",
    "permittivity": "eps",
    "mu": "mu",
    "permeability": "mu",
}

REQUIRED = ("kappa", "eps")


def _column_indices(headers: tuple[Any, ...], source: Path) -> dict[str, int]:
    indices: dict[str, int] = {}
    for i, header in enumerate(headers):
        key = str(header).strip().lower() if header is not None else ""
        if key in COLUMN_MAP:
            indices[COLUMN_MAP[key]] = i
    missing = [name for name in REQUIRED if name not in indices]
    if missing:
        raise ConfigError(f"{source}: missing column(s) {', '.join(missing)} in header {list(headers)}")
    return indices


def _to_material(columns: dict[str, np.ndarray], source: Path, name: str) -> MaterialModel:
    try:
        return tabulated(columns["kappa"], columns["eps"], columns.get("mu"), name=name)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def parse_csv(path: Path, name: str = "") -> MaterialModel:
    """Read a ``kappa, eps[, mu]`` table with a header row.

    Args:
        path: CSV file; kappa is in inverse length units.
        name: Material name carried by the returned model.

    Returns:
        A tabulated MaterialModel.
    """
    try:
        data = np.genfromtxt(path, delimiter=",", names=True, dtype=float, encoding="utf-8")
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read material table {path}: {exc}") from exc
    if data.dtype.names is None or data.size == 0:
        raise ConfigError(f"{path}: empty material table")
    data = np.atleast_1d(data)
    indices = _column_indices(data.dtype.names, path)
    names = data.dtype.names
    columns = {key: np.asarray(data[names[i]], dtype=float) for key, i in indices.items()}
    if any(np.isnan(col).any() for col in columns.values()):
        raise ConfigError(f"{path}: non-numeric or missing entries")
    return _to_material(columns, path, name or path.stem)


def parse_excel(path: Path, name: str = "") -> MaterialModel:
    """Read the active sheet of a workbook laid out like the CSV tables."""
    wb = load_workbook(path, read_only=True, data_only=True)
    ws: Worksheet | None = wb.active
    try:
        rows: list[tuple[Any, ...]] = list(ws.iter_rows(values_only=True)) if ws is not None else []
    finally:
        wb.close()
    if len(rows) < 2:
        raise ConfigError(f"{path}: empty material table")

    indices = _column_indices(rows[0], path)
    values: dict[str, list[float]] = {key: [] for key in indices}
    for row in rows[1:]:
        if all(cell is None for cell in row):
            continue
        for key, i in indices.items():
            cell = row[i] if i < len(row) else None
            if not isinstance(cell, int | float):
                raise ConfigError(f"{path}: non-numeric {key} entry {cell!r}")
            values[key].append(float(cell))
    columns = {key: np.asarray(v) for key, v in values.items()}
    return _to_material(columns, path, name or path.stem)


def parse_table(path: Path, name: str = "") -> MaterialModel:
    """Dispatch on the file suffix."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"material table {path} does not exist")
    if path.suffix.lower() in (".xlsx", ".xlsm"):
        return parse_excel(path, name)
    return parse_csv(path, name)
