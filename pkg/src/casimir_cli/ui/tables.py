"""Rich table builders for results, checks and settings."""

from collections.abc import Iterable, Sequence

from rich.table import Table

from ..models.results import EnergyResult, SweepRecord
from .console import get_check_style, get_convergence_style


def _unit_label(result: EnergyResult, length_unit: str) -> str:
    unit = f"ħc/{length_unit}"
    if result.per_unit == "area":
        return f"{unit}³"
    if result.per_unit == "length":
        return f"{unit}²"
    return unit


class ResultTable:
    """Factory for result tables."""

    @staticmethod
    def create_energy(result: EnergyResult, title: str = "Casimir energy", length_unit: str = "um") -> Table:
        """Create a two-column summary of one energy result."""
        table = Table(title=title, show_header=True, header_style="bold")
        table.add_column("Quantity", style="dim")
        table.add_column("Value", justify="right")

        style = get_convergence_style(result.converged)
        table.add_row("Energy", f"[energy]{result.value:.10g}[/] {_unit_label(result, length_unit)}")
        table.add_row("Quadrature error", f"{result.quad_err:.2e}")
        table.add_row("Truncation error", f"{result.trunc_err:.2e}")
        if result.order:
            table.add_row("Truncation order", str(result.order))
        if result.nodes:
            table.add_row("Nodes", str(result.nodes))
        table.add_row("Max |Im log det|", f"{result.max_imag:.1e}")
        table.add_row("Converged", f"[{style}]{'yes' if result.converged else 'no'}[/]")
        return table

    @staticmethod
    def create_sweep(records: Sequence[SweepRecord], title: str = "Sweep", length_unit: str = "um") -> Table:
        """Create a table with one row per sweep point."""
        table = Table(title=title, show_header=True, header_style="bold")
        if not records:
            return table
        unit = _unit_label(records[0].result, length_unit)

        table.add_column(records[0].sweep_param, justify="right", style="param")
        table.add_column(f"Energy [{unit}]", justify="right", style="energy")
        table.add_column("Quad. err", justify="right")
        table.add_column("Trunc. err", justify="right")
        table.add_column("Order", justify="right")
        table.add_column("Nodes", justify="right")
        table.add_column("", justify="center")

        for record in records:
            r = record.result
            style = get_convergence_style(r.converged)
            table.add_row(
                f"{record.value:g}",
                f"{r.value:.8g}",
                f"{r.quad_err:.1e}",
                f"{r.trunc_err:.1e}",
                str(r.order or "-"),
                str(r.nodes or "-"),
                f"[{style}]{'ok' if r.converged else 'capped'}[/]",
            )
        return table

    @staticmethod
    def create_checks(suite: str, outcomes: Iterable, title: str | None = None) -> Table:
        """Create a table of check outcomes (name, passed, detail)."""
        table = Table(title=title or f"check {suite}", show_header=True, header_style="bold")
        table.add_column("Check", min_width=30)
        table.add_column("Status", justify="center")
        table.add_column("Detail", style="dim")

        for outcome in outcomes:
            style = get_check_style(outcome.passed)
            table.add_row(outcome.name, f"[{style}]{'PASS' if outcome.passed else 'FAIL'}[/]", outcome.detail)
        return table

    @staticmethod
    def create_integrand(samples: Sequence[tuple[float, float, float]], title: str = "log det vs kappa") -> Table:
        """Create a table of (kappa, log det, imaginary residue) samples."""
        table = Table(title=title, show_header=True, header_style="bold")
        table.add_column("κ", justify="right", style="param")
        table.add_column("log det", justify="right", style="energy")
        table.add_column("|Im|", justify="right", style="dim")

        for kappa, value, imag in samples:
            table.add_row(f"{kappa:.6g}", f"{value:.10g}", f"{imag:.1e}")
        return table

    @staticmethod
    def create_materials(rows: Iterable[tuple[str, str, str]], title: str = "Materials") -> Table:
        """Create a table of (name, kind, source) material rows."""
        table = Table(title=title, show_header=True, header_style="bold")
        table.add_column("Name", style="param")
        table.add_column("Kind")
        table.add_column("Source", style="dim")

        for name, kind, source in rows:
            table.add_row(name, kind, source)
        return table

    @staticmethod
    def create_defaults(config: dict, known: Iterable[str], title: str = "User defaults") -> Table:
        """Create a table of the stored user defaults."""
        table = Table(title=title, show_header=True, header_style="bold")
        table.add_column("Key", style="param")
        table.add_column("Value", justify="right")

        for key in known:
            value = config.get(key)
            table.add_row(key, "[dim]-[/]" if value is None else str(value))
        return table
