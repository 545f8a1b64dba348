"""Main entry point for the STaR-DRO CLI."""

import json
import os
import sys
from pathlib import Path

import click
import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table

from star_dro import __version__
from star_dro.cli.exceptions import InputError, NumericalError, StarDROCLIError, handle_errors
from star_dro.diagnostics.export import export_trace
from star_dro.diagnostics.loaders import load_examples, load_run_config
from star_dro.diagnostics.records import RunRecord
from star_dro.diagnostics.recommend import recommend_hyperparams
from star_dro.evaluation.metrics import MatchingMode, evaluate_records
from star_dro.geometry.simplex import TsallisOrder, entmax_project
from star_dro.infrastructure.config import Method, RunConfig, resolve_output_dir
from star_dro.logging.logger import get_logger, setup_logging
from star_dro.training.experiments import (
    grouping_study,
    low_resource,
    regime_sweep,
    regularization_study,
    with_method,
    with_seed,
)
from star_dro.training.sweep import sweep as run_sweep
from star_dro.training.synthetic import generate_synthetic, save_dataset
from star_dro.training.trainer import train

console = Console()
logger = get_logger(__name__)

METHODS = [method.value for method in Method]
PRESETS = ["methods", "regimes", "regularization", "grouping"]


def _load_config(path: Path | None) -> RunConfig:
    return load_run_config(path) if path is not None else RunConfig()


def format_number(value: float) -> str:
    """Twelve significant digits; integral values keep a trailing ``.0``."""
    text = f"{value:.12g}"
    if text in ("nan", "inf", "-inf"):
        return text
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def _parse_vector(line: str, what: str) -> np.ndarray:
    try:
        values = [float(token) for token in line.replace(",", " ").split()]
    except ValueError as e:
        raise InputError(f"could not parse {what}: {line.strip()!r}") from e
    if not values:
        raise InputError(f"{what} is empty")
    return np.asarray(values, dtype=np.float64)


def _print_frame(frame: pd.DataFrame, title: str) -> None:
    flat = frame.reset_index()
    table = Table(title=title)
    for name in flat.columns:
        table.add_column(str(name))
    for row in flat.to_dict("records"):
        table.add_row(*(f"{v:.4f}" if isinstance(v, float) else str(v) for v in row.values()))
    console.print(table)


def _report_records(records: list[RunRecord], out: Path) -> None:
    """Export every record that has rows and print a summary table."""
    table = Table(title="Runs")
    table.add_column("run_id")
    table.add_column("method")
    table.add_column("regime")
    table.add_column("worst-group val loss", justify="right")
    table.add_column("status")
    for record in records:
        if record.rows:
            export_trace(record, out)
        regime = record.regime.regime.value if record.regime else "-"
        if record.diverged:
            status = "[red]diverged[/red]"
        elif record.error:
            status = f"[red]{record.error}[/red]"
        else:
            status = "[green]ok[/green]"
        table.add_row(
            record.run_id, record.method, regime, f"{record.worst_group_loss:.4f}", status
        )
    console.print(table)


@click.group()
@click.version_option(version=__version__, prog_name="star-dro")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose (debug) logging")
@click.option(
    "--log-dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Also write rotating log files (star-dro.log) to this directory",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool, log_dir: Path | None) -> None:
    """STaR-DRO: group-robust reweighting with sparse Tsallis mirror ascent.

    Train ERM, standard group DRO and STaR-DRO on synthetic grouped tasks,
    sweep hyperparameters, project dual vectors and score predictions.
    """
    ctx.ensure_object(dict)
    setup_logging(
        "DEBUG" if verbose else os.environ.get("LOG_LEVEL", "WARNING"),
        log_dir=str(log_dir) if log_dir is not None else None,
        enable_file_logging=log_dir is not None,
    )
    if verbose:
        logger.debug("verbose_mode_enabled")
    ctx.obj["verbose"] = verbose


@cli.command()
@click.option(
    "--config",
    "-c",
    "config_path",
    type=click.Path(path_type=Path),
    help="Run configuration (JSON, or YAML by suffix)",
)
@click.option("--method", "-m", type=click.Choice(METHODS), help="Override the training method")
@click.option("--seed", "-s", type=click.IntRange(min=0), help="Override run and task seed")
@click.option("--out", "-o", type=click.Path(path_type=Path), help="Output directory")
@handle_errors
def run(config_path: Path | None, method: str | None, seed: int | None, out: Path | None) -> None:
    """Train one model and write trace.csv and summary.json.

    Exits with code 4 if the run diverges; its trace is still written.
    """
    config = _load_config(config_path)
    if method is not None:
        config = with_method(config, Method(method), config.run_id)
    if seed is not None:
        config = with_seed(config, seed)
    out = resolve_output_dir(out if out is not None else config.output_dir)

    record = train(config)
    trace_path, summary_path = export_trace(record, out)
    if record.diverged:
        raise NumericalError(f"run {record.run_id} diverged: {record.error}")

    console.print(f"✓ {record.run_id} ({config.config_hash()[:12]}, seed {config.seed})")
    console.print(f"  trace:   {trace_path}")
    console.print(f"  summary: {summary_path}")


@cli.command()
@click.option(
    "--config",
    "-c",
    "config_path",
    type=click.Path(path_type=Path),
    help="Base run configuration",
)
@click.option(
    "--preset",
    type=click.Choice(PRESETS),
    default="methods",
    show_default=True,
    help=(
        "methods: ERM, DRO and STaR-DRO; regimes: baseline and eta x/÷ 100; "
        "regularization: weak vs strong decay on the low-resource task over 5 seeds; "
        "grouping: every grouping scheme under both loss signals"
    ),
)
@click.option("--workers", "-w", type=click.IntRange(min=1), help="Parallel runs")
@click.option("--out", "-o", type=click.Path(path_type=Path), help="Output directory")
@handle_errors
def sweep(config_path: Path | None, preset: str, workers: int | None, out: Path | None) -> None:
    """Run a preset family of configurations in parallel.

    Every run is exported under its own run id. Exits with code 4 if any run
    diverged and 1 if any run failed.
    """
    base = _load_config(config_path)
    out = resolve_output_dir(out if out is not None else base.output_dir)

    if preset == "regimes":
        records = list(regime_sweep(base, workers=workers).values())
    elif preset == "regularization":
        study = regularization_study(
            low_resource(base), range(base.seed, base.seed + 5), workers=workers
        )
        records = study.records
        _print_frame(study.medians, "Median validation loss by weight decay")
        weak_spread, strong_spread = study.spreads
        console.print(
            f"strong decay improved {study.improved_groups}/{len(study.medians)} groups; "
            f"spread {weak_spread:.4f} -> {strong_spread:.4f}"
        )
    elif preset == "grouping":
        grouping = grouping_study(base, workers=workers)
        records = grouping.records
        _print_frame(grouping.table, "Grouping schemes")
    else:
        configs = [
            with_method(base, method, f"{method.value}-seed{base.seed}") for method in Method
        ]
        records = run_sweep(configs, workers)

    _report_records(records, out)
    diverged = [r.run_id for r in records if r.diverged]
    failed = [r.run_id for r in records if r.error and not r.diverged]
    if failed:
        raise StarDROCLIError(f"runs failed: {', '.join(failed)}")
    if diverged:
        raise NumericalError(f"runs diverged: {', '.join(diverged)}")


@cli.command()
@click.option("--alpha", "-a", type=float, required=True, help="Tsallis order (> 1)")
@click.option(
    "--eta",
    "-e",
    type=click.FloatRange(min=0.0),
    default=0.0,
    show_default=True,
    help="Step size applied to an optional ascent vector",
)
@handle_errors
def project(alpha: float, eta: float) -> None:
    """Project a dual vector read from standard input onto the simplex.

    The first line holds the dual coordinates. An optional second line holds
    an ascent vector, added with weight (alpha - 1) * eta before projecting.
    Prints the weights and the threshold, or "1.0" for a single coordinate.
    """
    lines = [line for line in sys.stdin.read().splitlines() if line.strip()]
    if not lines:
        raise InputError("expected a dual vector on standard input")
    order = TsallisOrder.of(alpha)
    dual = _parse_vector(lines[0], "dual vector")
    if len(lines) > 1:
        ascent = _parse_vector(lines[1], "ascent vector")
        if ascent.size != dual.size:
            raise InputError(
                f"ascent vector has {ascent.size} entries, dual vector has {dual.size}"
            )
        dual = dual + (order.alpha - 1.0) * eta * ascent

    projection = entmax_project(dual, order)
    weights = " ".join(format_number(float(w)) for w in projection.weights)
    if dual.size == 1:
        click.echo(weights)
    else:
        click.echo(f"{weights} | lambda={format_number(projection.threshold)}")


@cli.command()
@click.option("--pred", "pred_path", type=click.Path(path_type=Path), required=True)
@click.option("--gold", "gold_path", type=click.Path(path_type=Path), required=True)
@click.option(
    "--matching",
    type=click.Choice([mode.value for mode in MatchingMode]),
    default=MatchingMode.LITERAL.value,
    show_default=True,
    help="Span matching: literal definition or greedy one-to-one",
)
@handle_errors
def evaluate(pred_path: Path, gold_path: Path, matching: str) -> None:
    """Score predicted annotations against gold at Code, Sub-code and Span level.

    Prints a JSON report with percentages rounded to two decimals.
    """
    report = evaluate_records(
        load_examples(pred_path), load_examples(gold_path), MatchingMode(matching)
    )
    click.echo(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))


@cli.command()
@click.option(
    "--config",
    "-c",
    "config_path",
    type=click.Path(path_type=Path),
    help="Run configuration whose task section describes the dataset",
)
@click.option("--seed", "-s", type=click.IntRange(min=0), help="Override the task seed")
@click.option("--out", "-o", type=click.Path(path_type=Path), required=True)
@handle_errors
def generate(config_path: Path | None, seed: int | None, out: Path) -> None:
    """Generate a synthetic grouped dataset usable as dataset_path."""
    config = _load_config(config_path)
    task = config.task if seed is None else config.task.model_copy(update={"seed": seed})
    out = resolve_output_dir(out)
    paths = save_dataset(generate_synthetic(task), out)
    console.print(f"✓ Wrote {len(paths)} files to {out}")


@cli.command()
@click.option("--groups", "-g", type=int, required=True, help="Number of groups")
@click.option(
    "--format",
    "-f",
    "output_format",
    type=click.Choice(["table", "json"]),
    default="table",
    show_default=True,
)
@handle_errors
def recommend(groups: int, output_format: str) -> None:
    """Suggest STaR-DRO hyperparameter ranges for a group count."""
    recommendation = recommend_hyperparams(groups)
    if output_format == "json":
        click.echo(json.dumps(recommendation.to_dict(), indent=2, sort_keys=True))
        return

    row = recommendation.row
    table = Table(title=f"Recommended ranges for G={groups} (bucket {row.label})")
    table.add_column("parameter")
    table.add_column("range", justify="right")
    table.add_row("eta", f"{row.eta[0]:g} - {row.eta[1]:g}")
    table.add_row("rho", f"{row.rho[0]:g} - {row.rho[1]:g}")
    table.add_row("alpha", f"{row.alpha[0]:g} - {row.alpha[1]:g}")
    table.add_row("weight decay", f"{row.weight_decay[0]:g} - {row.weight_decay[1]:g}")
    table.add_row("activation epoch", str(row.activation_epoch))
    table.add_row("eta_eff target", f"{recommendation.eta_eff_target:.3g}")
    console.print(table)
    if recommendation.degenerate:
        console.print(
            "[yellow]⚠ With a single group the robust objective equals ERM.[/yellow]"
        )


if __name__ == "__main__":
    cli()
