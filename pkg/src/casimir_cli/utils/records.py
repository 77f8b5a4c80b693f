"""Result records for stdout (JSON) and result files (CSV or JSON)."""

import csv
import json
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from ..models.results import EnergyResult, ForceResult, SweepRecord

CSV_COLUMNS = ("sweep_param", "value", "energy", "quad_err", "trunc_err", "lmax_used", "nodes_used", "converged")


def _clean(value: Any) -> Any:
    """Make numpy scalars and non-finite floats JSON friendly."""
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_clean(v) for v in value]
    if isinstance(value, bool | int | float | str) or value is None:
        return value
    return str(value)


def result_to_dict(result: EnergyResult) -> dict[str, Any]:
    """Convert an EnergyResult to a JSON-serializable dict."""
    return {
        "energy": result.value,
        "quad_err": result.quad_err,
        "trunc_err": result.trunc_err,
        "error": result.error,
        "lmax_used": result.order,
        "nodes_used": result.nodes,
        "max_imag": result.max_imag,
        "converged": result.converged,
        "per_unit": result.per_unit,
        "diagnostics": _clean(result.diagnostics),
    }


def record_to_dict(record: SweepRecord) -> dict[str, Any]:
    return {"sweep_param": record.sweep_param, "value": record.value, **result_to_dict(record.result)}


def force_to_dict(force: ForceResult) -> dict[str, Any]:
    return {"force": force.value, "error": force.error, "step": force.step}


def record_to_row(record: SweepRecord) -> list[str]:
    """One CSV row in ``CSV_COLUMNS`` order; floats use repr for exact round trips."""
    r = record.result
    return [
        record.sweep_param,
        repr(float(record.value)),
        repr(float(r.value)),
        repr(float(r.quad_err)),
        repr(float(r.trunc_err)),
        str(r.order),
        str(r.nodes),
        "true" if r.converged else "false",
    ]


def print_json(data: Any) -> None:
    """Print data as formatted JSON to stdout."""
    print(json.dumps(_clean(data), indent=2, ensure_ascii=False))


def write_csv(records: Sequence[SweepRecord], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(record_to_row(record))


def write_json(records: Sequence[SweepRecord], path: Path) -> None:
    payload = [record_to_dict(record) for record in records]
    Path(path).write_text(json.dumps(_clean(payload), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def write_records(records: Sequence[SweepRecord], path: Path, fmt: str = "csv") -> None:
    """Write records in the order given."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        write_json(records, path)
    else:
        write_csv(records, path)


def write_integrand(samples: Sequence[tuple[float, float, float]], path: Path) -> None:
    """Write (kappa, logdet, imag) samples as CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("kappa", "logdet", "imag"))
        for row in samples:
            writer.writerow([repr(float(v)) for v in row])
