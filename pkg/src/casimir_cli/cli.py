"""Command-line interface for casimir-cli."""

import logging
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor, as_completed
from contextlib import contextmanager, nullcontext
from pathlib import Path

import click
import numpy as np
from rich.logging import RichHandler
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn

from .checks import run_check
from .compute.energy import apply_medium, force_by_difference, sample_integrand
from .compute.geometries import build_pipeline, evaluate
from .config import DEFAULT_KEYS, clear_default, get_config_path, get_default, load_config, set_default, thread_count
from .data.registry import BUILTIN_MATERIALS
from .errors import CasimirError, ConfigError, ConvergenceError, GeometryError, SelectionError
from .models.geometry import GeometryConfig, with_parameter
from .models.results import SweepRecord
from .models.run import RunConfig, load_run_config, run_config_schema
from .ui.console import console, err_console
from .ui.tables import ResultTable
from .utils.records import force_to_dict, print_json, record_to_dict, write_integrand, write_records

logger = logging.getLogger(__name__)

EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 3
EXIT_NUMERICAL = 4


def _configure_logging(verbose: int) -> None:
    if not verbose:
        return
    logging.basicConfig(
        level=logging.DEBUG if verbose > 1 else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, ConvergenceError):
        return EXIT_NOT_CONVERGED
    if isinstance(exc, ConfigError | GeometryError | SelectionError):
        return EXIT_CONFIG
    return EXIT_NUMERICAL


@contextmanager
def _reporting_errors(ctx: click.Context) -> Iterator[None]:
    """Print library errors in the error style and exit with their code."""
    try:
        yield
    except (CasimirError, ArithmeticError) as exc:
        # plain ArithmeticError is a float overflow outside the library checks
        logger.debug("%s", type(exc).__name__, exc_info=True)
        if ctx.obj.get("json"):
            print_json({"error": str(exc), "type": type(exc).__name__})
        else:
            console.print(f"[error]{exc}[/]")
        ctx.exit(_exit_code(exc))


def _resolve(flag, configured, key: str):
    """Command-line flag > run-config field > user default."""
    if flag is not None:
        return flag
    if configured is not None:
        return configured
    return get_default(key)


def _length_unit(config: RunConfig) -> str:
    return config.length_unit or get_default("length_unit") or "um"


def _evaluate_point(
    config: RunConfig,
    geometry: GeometryConfig,
    base_dir: Path | None,
    rtol: float | None,
    lmax_cap: int | None,
    strict: bool,
    threads: int,
):
    quadrature = config.numerics.quadrature(rtol)
    truncation = config.numerics.truncation(build_pipeline(geometry).truncation, lmax_cap)
    return evaluate(
        geometry,
        beta=config.beta,
        medium=config.to_medium(base_dir),
        quadrature=quadrature,
        truncation=truncation,
        strict=strict,
        threads=threads,
    )


def run_energy(
    config: RunConfig,
    *,
    base_dir: Path | None = None,
    sweep: bool = True,
    rtol: float | None = None,
    lmax_cap: int | None = None,
    strict: bool = False,
    threads: int | None = None,
    on_point: Callable[[SweepRecord], None] | None = None,
) -> list[SweepRecord]:
    """Evaluate every point of ``config`` and return the records in grid order.

    Points run concurrently; with more than one point each evaluation is
    single threaded. Records are written to the configured output (if any)
    after all points finished; when a point raises, the points not yet
    started are cancelled and the completed records are written before the
    error propagates.
    """
    rtol = _resolve(rtol, config.numerics.rtol, "rtol")
    lmax_cap = _resolve(lmax_cap, config.numerics.lmax_cap, "lmax_cap")
    geometry = config.to_geometry(base_dir)

    if sweep and config.sweep is not None:
        parameter = config.sweep.parameter
        points = [(float(v), with_parameter(geometry, parameter, float(v))) for v in config.sweep.grid()]
    else:
        parameter = "d"
        points = [(geometry.d, geometry)]

    workers = thread_count(threads)
    inner = workers if len(points) == 1 else 1
    records: list[SweepRecord | None] = [None] * len(points)
    with ThreadPoolExecutor(max_workers=min(workers, len(points))) as pool:
        futures = {
            pool.submit(_evaluate_point, config, point, base_dir, rtol, lmax_cap, strict, inner): i
            for i, (_, point) in enumerate(points)
        }
        for future in as_completed(futures):
            i = futures[future]
            try:
                result = future.result()
            except Exception:
                for pending in futures:
                    pending.cancel()
                finished = [r for r in records if r is not None]
                if finished and config.output.path is not None:
                    logger.info("writing %d completed of %d points", len(finished), len(points))
                    write_records(finished, config.output.path, config.output.format)
                raise
            records[i] = SweepRecord(parameter, points[i][0], result)
            logger.info("%s = %g: %s", parameter, points[i][0], records[i].result)
            if on_point is not None:
                on_point(records[i])

    if config.output.path is not None:
        write_records(records, config.output.path, config.output.format)
    return records


def _load(config_path: Path, out: Path | None, fmt: str | None) -> tuple[RunConfig, Path]:
    config = load_run_config(config_path)
    if out is not None or fmt is not None:
        output = config.output.model_copy(
            update={k: v for k, v in {"path": out, "format": fmt}.items() if v is not None}
        )
        config = config.model_copy(update={"output": output})
    return config, config_path.resolve().parent


def _run_and_report(ctx: click.Context, config: RunConfig, base_dir: Path, sweep: bool, **options) -> None:
    json_output: bool = ctx.obj["json"]
    unit = _length_unit(config)
    count = len(config.sweep.grid()) if sweep and config.sweep is not None else 1

    if json_output:
        records = run_energy(config, base_dir=base_dir, sweep=sweep, **options)
        print_json(
            {
                "geometry": config.geometry.variant,
                "length_unit": unit,
                "beta": config.beta,
                "records": [record_to_dict(r) for r in records],
            }
        )
    else:
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            console=console,
            transient=True,
        ) as progress:
            task = progress.add_task(f"Evaluating {config.geometry.variant}...", total=count)
            records = run_energy(
                config,
                base_dir=base_dir,
                sweep=sweep,
                on_point=lambda _: progress.advance(task),
                **options,
            )
        if len(records) == 1 and not sweep:
            console.print(ResultTable.create_energy(records[0].result, f"{config.geometry.variant}", unit))
        else:
            console.print(ResultTable.create_sweep(records, f"{config.geometry.variant} sweep", unit))
        if config.output.path is not None:
            console.print(f"[success]Wrote {len(records)} record(s) to {config.output.path}[/]")

    if not all(r.result.converged for r in records):
        if not json_output:
            console.print("[warning]Some points hit a quadrature or truncation cap.[/]")
        ctx.exit(EXIT_NOT_CONVERGED)


def _run_options(fn):
    fn = click.option("--strict", is_flag=True, help="Fail instead of flagging points that hit a cap")(fn)
    fn = click.option("--lmax-cap", type=click.IntRange(min=1), help="Largest truncation order")(fn)
    fn = click.option("--rtol", type=click.FloatRange(min=0.0, min_open=True), help="Quadrature tolerance")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Result file format")(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Result file")(fn)
    fn = click.option(
        "--config",
        "config_path",
        required=True,
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="Run configuration (JSON)",
    )(fn)
    return fn


@click.group()
@click.option("--json", "json_output", is_flag=True, help="Output data as JSON")
@click.option("-v", "--verbose", count=True, help="Log progress (-vv for debug detail)")
@click.pass_context
def main(ctx: click.Context, json_output: bool, verbose: int) -> None:
    """Casimir energies from scattering amplitudes and translation matrices."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = json_output
    _configure_logging(verbose)


@main.command()
@_run_options
@click.pass_context
def energy(
    ctx: click.Context,
    config_path: Path,
    out: Path | None,
    fmt: str | None,
    rtol: float | None,
    lmax_cap: int | None,
    strict: bool,
) -> None:
    """Compute the energy of one configuration."""
    with _reporting_errors(ctx):
        config, base_dir = _load(config_path, out, fmt)
        _run_and_report(ctx, config, base_dir, sweep=False, rtol=rtol, lmax_cap=lmax_cap, strict=strict)


@main.command()
@_run_options
@click.pass_context
def sweep(
    ctx: click.Context,
    config_path: Path,
    out: Path | None,
    fmt: str | None,
    rtol: float | None,
    lmax_cap: int | None,
    strict: bool,
) -> None:
    """Compute the energy over the configured parameter grid."""
    with _reporting_errors(ctx):
        config, base_dir = _load(config_path, out, fmt)
        if config.sweep is None:
            raise ConfigError("sweep: the run config has no 'sweep' section")
        _run_and_report(ctx, config, base_dir, sweep=True, rtol=rtol, lmax_cap=lmax_cap, strict=strict)


@main.command()
@click.argument("suite", default="all")
@click.pass_context
def check(ctx: click.Context, suite: str) -> None:
    """Run a self-check suite (or all of them)."""
    json_output: bool = ctx.obj["json"]
    try:
        with console.status(f"Running {suite} checks...") if not json_output else nullcontext():
            report = run_check(suite)
    except ConfigError as exc:
        raise click.BadParameter(str(exc), param_hint="SUITE") from exc
    except (CasimirError, ArithmeticError) as exc:
        console.print(f"[error]{suite}: {exc}[/]")
        ctx.exit(EXIT_NUMERICAL)

    if json_output:
        print_json(
            {
                "suite": report.suite,
                "passed": report.passed,
                "checks": [{"name": o.name, "passed": o.passed, "detail": o.detail} for o in report.outcomes],
            }
        )
    else:
        console.print(ResultTable.create_checks(report.suite, report.outcomes))
        style = "success" if report.passed else "error"
        console.print(f"[{style}]{report.suite}: {'PASS' if report.passed else 'FAIL'}[/]")
    if not report.passed:
        ctx.exit(EXIT_NUMERICAL)


@main.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Run configuration (JSON)",
)
@click.option("--kappa", "kappas", type=float, multiple=True, help="Sample at this kappa (repeatable)")
@click.option("--points", default=20, show_default=True, type=click.IntRange(min=2), help="Log-spaced samples")
@click.option("--order", type=click.IntRange(min=1), help="Truncation order (default: pipeline start)")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write kappa, logdet, imag as CSV")
@click.pass_context
def integrand(
    ctx: click.Context,
    config_path: Path,
    kappas: tuple[float, ...],
    points: int,
    order: int | None,
    out: Path | None,
) -> None:
    """Dump the per-frequency log det of one configuration."""
    json_output: bool = ctx.obj["json"]
    with _reporting_errors(ctx):
        config = load_run_config(config_path)
        base_dir = config_path.resolve().parent
        pipeline = apply_medium(build_pipeline(config.to_geometry(base_dir)), config.to_medium(base_dir))
        grid = list(kappas) or list(np.geomspace(1e-2, 20.0, points) / pipeline.d_char)
        values = sample_integrand(pipeline, grid, order)
        samples = [(float(k), v.value, v.imag) for k, v in zip(grid, values)]

    if out is not None:
        write_integrand(samples, out)
    if json_output:
        print_json({"pipeline": pipeline.name, "samples": [{"kappa": k, "logdet": v, "imag": i} for k, v, i in samples]})
    else:
        console.print(ResultTable.create_integrand(samples, f"{pipeline.name}: log det vs κ"))


@main.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Run configuration (JSON)",
)
@click.option("--step", type=click.FloatRange(min=0.0, min_open=True), help="Difference step (default 1% of the gap)")
@click.option("--rtol", type=click.FloatRange(min=0.0, min_open=True), help="Quadrature tolerance")
@click.option("--lmax-cap", type=click.IntRange(min=1), help="Largest truncation order")
@click.pass_context
def force(
    ctx: click.Context,
    config_path: Path,
    step: float | None,
    rtol: float | None,
    lmax_cap: int | None,
) -> None:
    """Force -dE/dd by central differences with a Richardson check."""
    json_output: bool = ctx.obj["json"]
    with _reporting_errors(ctx):
        config = load_run_config(config_path)
        base_dir = config_path.resolve().parent
        geometry = config.to_geometry(base_dir)
        h = step if step is not None else 0.01 * geometry.gap
        rtol = _resolve(rtol, config.numerics.rtol, "rtol")
        lmax_cap = _resolve(lmax_cap, config.numerics.lmax_cap, "lmax_cap")
        threads = thread_count()

        def energy_at(d: float):
            point = with_parameter(geometry, "d", d)
            return _evaluate_point(config, point, base_dir, rtol, lmax_cap, False, threads)

        result = force_by_difference(energy_at, geometry.d, h)

    if json_output:
        print_json({"geometry": config.geometry.variant, "d": geometry.d, **force_to_dict(result)})
    else:
        console.print(
            f"Force at d = {geometry.d:g}: [energy]{result.value:.10g}[/] "
            f"[energy.error]± {result.error:.2g}[/] (step {result.step:g})"
        )


@main.command()
def schema() -> None:
    """Print the JSON schema of run configuration files."""
    click.echo(run_config_schema())


@main.command()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Also list the materials defined in this run configuration",
)
@click.pass_context
def materials(ctx: click.Context, config_path: Path | None) -> None:
    """List the material names a run configuration can refer to."""
    rows = [(name, factory().kind.value, "built-in") for name, factory in BUILTIN_MATERIALS.items()]
    with _reporting_errors(ctx):
        if config_path is not None:
            config = load_run_config(config_path)
            for name, spec in config.materials.items():
                rows.append((name, spec.kind, str(spec.file) if spec.file else config_path.name))

    if ctx.obj["json"]:
        print_json([{"name": n, "kind": k, "source": s} for n, k, s in rows])
    else:
        console.print(ResultTable.create_materials(rows))


@main.group()
def defaults() -> None:
    """Show or change user defaults."""


@defaults.command("show")
@click.pass_context
def defaults_show(ctx: click.Context) -> None:
    """Show the stored defaults."""
    with _reporting_errors(ctx):
        config = load_config()
    if ctx.obj["json"]:
        print_json({key: config.get(key) for key in DEFAULT_KEYS})
    else:
        console.print(ResultTable.create_defaults(config, DEFAULT_KEYS))
        console.print(f"[dim]Config file: {get_config_path()}[/]")


@defaults.command("set")
@click.argument("key")
@click.argument("value")
@click.pass_context
def defaults_set(ctx: click.Context, key: str, value: str) -> None:
    """Store a default (rtol, lmax_cap, threads or length_unit)."""
    with _reporting_errors(ctx):
        set_default(key, value)
    if not ctx.obj["json"]:
        console.print(f"[success]{key} set to {value}[/]")


@defaults.command("clear")
@click.argument("key", required=False)
@click.pass_context
def defaults_clear(ctx: click.Context, key: str | None) -> None:
    """Remove one default, or all of them."""
    with _reporting_errors(ctx):
        clear_default(key)
    if not ctx.obj["json"]:
        console.print(f"[success]Cleared {key or 'all defaults'}[/]")


if __name__ == "__main__":
    main()
