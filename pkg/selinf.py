"""
selinf CLI Application

Selection followed by exact selective inference for linear regression,
plus the simulation and bootstrap experiments that check it.
"""

import json
import traceback
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel

from selection_inference.config import AppConfig, ExperimentConfig
from selection_inference.data import Dataset
from selection_inference.errors import EXIT_OK, exit_code_for
from selection_inference.harness import (
    BOOTSTRAP_COLUMNS,
    COVERAGE_COLUMNS,
    HISTOGRAM_COLUMNS,
    QQ_COLUMNS,
    SHAPE_COLUMNS,
    InferenceRecord,
    ScreenRecord,
    json_lines,
    load_csv,
    run_coverage_experiment,
    run_interval_shape,
    run_pivot_null_experiment,
    run_residual_bootstrap,
    synthetic_standin,
    write_table,
)
from selection_inference.inference import estimate_sigma2, infer_selected
from selection_inference.logging import TyperLogger
from selection_inference.selectors import Procedure, create_selector

load_dotenv()

app = typer.Typer(
    name="selinf",
    help="Exact post-selection inference for linear regression",
    add_completion=False,
)

# stdout carries command output; everything else goes to stderr
console = Console(stderr=True)

DataOption = typer.Option(None, "--data", "-d", help="CSV file with a header row")
ResponseOption = typer.Option(None, "--response", "-r", help="Response column name")
ProcedureOption = typer.Option(None, "--procedure", "-p", help="Selection procedure")
KOption = typer.Option(None, "--k", help="Model size for ms, omp and the screening stage of ms-lasso")
LambdaOption = typer.Option(None, "--lambda", help="Lasso penalty for ms-lasso")
AlphaOption = typer.Option(None, "--alpha", help="Significance level")
Sigma2Option = typer.Option(None, "--sigma2", help="Known noise variance")
TrialsOption = typer.Option(None, "--trials", help="Trials or bootstrap replications")
SeedOption = typer.Option(None, "--seed", help="Random seed")
OutOption = typer.Option(None, "--out", "-o", help="Output file")
ConfigOption = typer.Option(None, "--config", "-c", help="Path to YAML configuration file")
WorkersOption = typer.Option(None, "--workers", help="Worker threads for trials")


def display_error(error: BaseException, context: str = "Command failed") -> None:
    """Display error with rich formatting"""
    console.print(f"\n[bold red]Error: {context}[/bold red]")
    console.print(Panel(str(error), title="Error Details", border_style="red", title_align="left"))
    diagnostics = getattr(error, "diagnostics", None)
    if diagnostics:
        console.print(
            Panel(
                json.dumps(diagnostics, indent=2, default=str),
                title="Diagnostics",
                border_style="red",
                title_align="left",
            )
        )
    if not isinstance(error, (ValueError, FileNotFoundError, ArithmeticError)):
        console.print(
            Panel(
                "".join(traceback.format_exception(type(error), error, error.__traceback__)),
                title="Traceback",
                border_style="red",
                title_align="left",
            )
        )


def run_command(action: Callable[[], None], context: str) -> None:
    """Run a command body and exit with 0, 2 (validation) or 3 (numerical)"""
    try:
        action()
    except typer.Exit:
        raise
    except Exception as e:
        display_error(e, context)
        raise typer.Exit(exit_code_for(e)) from e
    raise typer.Exit(EXIT_OK)


def load_app_config(config_path: Optional[Path]) -> AppConfig:
    """Load configuration from YAML, or defaults when no file is given"""
    if config_path is None:
        return AppConfig()
    return AppConfig.from_yaml(config_path)


def merge_experiment(app_config: AppConfig, **overrides: Any) -> ExperimentConfig:
    """Apply command-line overrides on top of the configured experiment and revalidate"""
    values: Dict[str, Any] = app_config.experiment.model_dump()
    values.update({key: value for key, value in overrides.items() if value is not None})
    return ExperimentConfig(**values)


def create_logger(app_config: AppConfig) -> TyperLogger:
    return TyperLogger("selinf", app_config.logging, console=console)


def resolve_data(data: Optional[Path], app_config: AppConfig) -> Path:
    path = data or app_config.data_path
    if path is None:
        raise FileNotFoundError("No data file given; pass --data or set data_path in the configuration")
    return path


def resolve_out(out: Optional[Path], app_config: AppConfig, default_name: str) -> Path:
    return out or app_config.output_directory / default_name


def with_sigma2(dataset: Dataset, sigma2: Optional[float]) -> Dataset:
    if sigma2 is not None:
        return dataset.with_sigma2(sigma2)
    return dataset.with_sigma2(estimate_sigma2(dataset))


@app.command()
def screen(
    data: Optional[Path] = DataOption,
    response: Optional[str] = ResponseOption,
    procedure: Optional[Procedure] = ProcedureOption,
    k: Optional[int] = KOption,
    lam: Optional[float] = LambdaOption,
    config_path: Optional[Path] = ConfigOption,
):
    """Run a selection procedure and print the selected model as JSON"""

    def action() -> None:
        app_config = load_app_config(config_path)
        experiment = merge_experiment(app_config, response=response, procedure=procedure, k=k, lam=lam)
        dataset = load_csv(resolve_data(data, app_config), experiment.response)
        selector = create_selector(experiment.procedure, experiment.k, experiment.lam)
        model = selector.select(dataset)
        typer.echo(ScreenRecord.from_model(dataset, model).model_dump_json())

    run_command(action, "Selection failed")


@app.command()
def infer(
    data: Optional[Path] = DataOption,
    response: Optional[str] = ResponseOption,
    procedure: Optional[Procedure] = ProcedureOption,
    k: Optional[int] = KOption,
    lam: Optional[float] = LambdaOption,
    alpha: Optional[float] = AlphaOption,
    sigma2: Optional[float] = Sigma2Option,
    out: Optional[Path] = OutOption,
    config_path: Optional[Path] = ConfigOption,
):
    """Select, then print one JSON line of selective inference per selected coefficient"""

    def action() -> None:
        app_config = load_app_config(config_path)
        experiment = merge_experiment(
            app_config,
            response=response,
            procedure=procedure,
            k=k,
            lam=lam,
            alpha_level=alpha,
            sigma2=sigma2,
        )
        logger = create_logger(app_config)
        dataset = with_sigma2(load_csv(resolve_data(data, app_config), experiment.response), experiment.sigma2)
        logger.debug("Loaded data", n=dataset.n, p=dataset.p, sigma2=dataset.sigma2)

        model, event = create_selector(experiment.procedure, experiment.k, experiment.lam).run(dataset)
        results = infer_selected(dataset, model, event, experiment.alpha_level)
        for result in results:
            if result.truncation.tie is not None:
                logger.warning(
                    "Observed contrast ties a truncation limit; interval left unbounded",
                    index=result.coefficient_index,
                    name=result.name,
                    tie=result.truncation.tie,
                )
        lines =json_lines(InferenceRecord.from_result(result) for result in results)
        for line in lines:
            typer.echo(line)
        if out is not None:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
            logger.info(f"Wrote {len(lines)} records", path=str(out))

    run_command(action, "Inference failed")


@app.command("simulate-coverage")
def simulate_coverage(
    procedure: Optional[Procedure] = ProcedureOption,
    k: Optional[int] = KOption,
    lam: Optional[float] = LambdaOption,
    alpha: Optional[float] = AlphaOption,
    sigma2: Optional[float] = Sigma2Option,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    config_path: Optional[Path] = ConfigOption,
    workers: Optional[int] = WorkersOption,
    fixed_design: Optional[bool] = typer.Option(None, "--fixed-design/--random-design", help="Reuse one design"),
):
    """Coverage of selective and z intervals over the SNR grid"""

    def action() -> None:
        app_config = load_app_config(config_path)
        experiment = merge_experiment(
            app_config,
            procedure=procedure,
            k=k,
            lam=lam,
            alpha_level=alpha,
            sigma2=sigma2,
            trials=trials,
            seed=seed,
            workers=workers,
            fixed_design=fixed_design,
        )
        logger = create_logger(app_config)
        logger.start_task("Running coverage experiment")
        rows = run_coverage_experiment(experiment, logger)
        path = write_table(rows, COVERAGE_COLUMNS, resolve_out(out, app_config, "coverage.csv"))
        logger.end_task(f"Coverage table written to {path}")
        logger.show_table(
            "Coverage",
            {f"snr={row.snr:g}": f"adjusted={row.adjusted_coverage:.3f} z={row.z_coverage:.3f}" for row in rows},
        )

    run_command(action, "Coverage experiment failed")


@app.command("pivot-null")
def pivot_null(
    procedure: Optional[Procedure] = ProcedureOption,
    k: Optional[int] = KOption,
    lam: Optional[float] = LambdaOption,
    sigma2: Optional[float] = Sigma2Option,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    config_path: Optional[Path] = ConfigOption,
    workers: Optional[int] = WorkersOption,
):
    """Histogram and QQ table of pivots at the true target, with a KS test"""

    def action() -> None:
        app_config = load_app_config(config_path)
        experiment = merge_experiment(
            app_config,
            procedure=procedure,
            k=k,
            lam=lam,
            sigma2=sigma2,
            trials=trials,
            seed=seed,
            workers=workers,
        )
        logger = create_logger(app_config)
        logger.start_task("Sampling null pivots")
        result = run_pivot_null_experiment(experiment, logger)
        path = write_table(result.histogram(), HISTOGRAM_COLUMNS, resolve_out(out, app_config, "pivot_null.csv"))
        qq_path = write_table(result.qq(), QQ_COLUMNS, path.with_name(f"{path.stem}_qq.csv"))
        logger.end_task(f"Pivot histogram written to {path} and {qq_path}")
        typer.echo(
            json.dumps(
                {
                    "pivots": int(result.pivots.size),
                    "ks_statistic": result.ks_statistic,
                    "ks_pvalue": result.ks_pvalue,
                    "failures": result.failures,
                }
            )
        )

    run_command(action, "Pivot experiment failed")


@app.command()
def bootstrap(
    data: Optional[Path] = DataOption,
    response: Optional[str] = ResponseOption,
    procedure: Optional[Procedure] = ProcedureOption,
    k: Optional[int] = KOption,
    lam: Optional[float] = LambdaOption,
    sigma2: Optional[float] = Sigma2Option,
    trials: Optional[int] = TrialsOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    config_path: Optional[Path] = ConfigOption,
    workers: Optional[int] = WorkersOption,
):
    """Residual bootstrap coverage against the nominal grid"""

    def action() -> None:
        app_config = load_app_config(config_path)
        experiment = merge_experiment(
            app_config,
            response=response,
            procedure=procedure,
            k=k,
            lam=lam,
            sigma2=sigma2,
            trials=trials,
            seed=seed,
            workers=workers,
        )
        logger = create_logger(app_config)
        path = data or app_config.data_path
        if path is None:
            logger.warning("No data file given; using the synthetic n=442, p=10 stand-in")
            source = synthetic_standin(experiment.seed)
        else:
            source = path
        logger.start_task("Running residual bootstrap")
        rows = run_residual_bootstrap(source, experiment, logger)
        written = write_table(rows, BOOTSTRAP_COLUMNS, resolve_out(out, app_config, "bootstrap.csv"))
        logger.end_task(f"Bootstrap table written to {written}")
        logger.show_table(
            "Bootstrap coverage",
            {
                f"nominal={row.nominal:g}": f"adjusted={row.adjusted_coverage:.3f} z={row.z_coverage:.3f}"
                for row in rows
            },
        )

    run_command(action, "Bootstrap failed")


@app.command("interval-shape")
def interval_shape(
    alpha: Optional[float] = AlphaOption,
    sigma2: Optional[float] = Sigma2Option,
    out: Optional[Path] = OutOption,
    config_path: Optional[Path] = ConfigOption,
    bound: Optional[float] = typer.Option(None, "--bound", help="Truncation half-width in standard deviations"),
    points: Optional[int] = typer.Option(None, "--points", help="Number of observations"),
):
    """Selective versus z intervals for a contrast truncated to [-b sigma, b sigma]"""

    def action() -> None:
        app_config = load_app_config(config_path)
        experiment = merge_experiment(app_config, alpha_level=alpha, sigma2=sigma2, bound=bound, points=points)
        logger = create_logger(app_config)
        path = write_table(run_interval_shape(experiment), SHAPE_COLUMNS, resolve_out(out, app_config, "interval_shape.csv"))
        logger.info(f"Interval shapes written to {path}")

    run_command(action, "Interval shape experiment failed")


if __name__ == "__main__":
    app()
