"""
Convergence study driven by an experiment config: error decomposition over a
(D, n) grid, rate bounds and excess errors over the n grid, and the lemma
checks. Lemma failures are reported, never raised.
"""
from pathlib import Path
from typing import Dict, Optional

import pandas as pd
import typer
from loguru import logger

from flip.config import OUTPUT_FORMATS, ExperimentConfig
from flip.errors import ConfigError, InvertibilityError
from flip.evaluation.decomposition import noise_floor_convergence
from flip.evaluation.lemmas import lemma_checks
from flip.evaluation.rates import calibrate_rate_constant, excess_error_series, model_rate_bounds
from flip.evaluation.report import emit_report, rows_frame
from flip.utils import exit_on_error


def decomposition_table(config: ExperimentConfig) -> pd.DataFrame:
    D_grid = config.study.D_grid or [config.D]
    rows = []
    for D in D_grid:
        reports = noise_floor_convergence(
            config.model,
            D,
            config.study.n_grid,
            config.run.mc_runs,
            config.run.seed,
            pivot_tol=config.run.pivot_tol,
        )
        rows.extend(r.as_row() for r in reports)
    return rows_frame(rows)


def rate_table(config: ExperimentConfig) -> Optional[pd.DataFrame]:
    m_of_n = config.rate_sequence()
    n_grid = [n for n in config.study.n_grid if n >= 2 and m_of_n(n) < n]
    skipped = sorted(set(config.study.n_grid) - set(n_grid))
    if skipped:
        logger.warning(f"Rate bounds need n >= 2 and m_n < n, skipping n in {skipped}")
    if not n_grid:
        return None
    schedule = config.schedule()
    try:
        bounds = model_rate_bounds(
            config.model, schedule, n_grid, m_of_n, config.study.truncation
        )
    except InvertibilityError as e:
        logger.warning(f"Skipping rate bounds: {e}")
        return None

    frame = rows_frame([b.as_row() for b in bounds])
    if config.run.mc_runs > 0:
        excess = excess_error_series(
            config.model, schedule, n_grid, config.run.mc_runs, config.run.seed, config.run.pivot_tol
        )
        frame["excess_mean"] = [mean for mean, _ in excess]
        frame["excess_stderr"] = [stderr for _, stderr in excess]
        if frame["bound"].abs().sum() > 0:
            K = calibrate_rate_constant(frame["excess_mean"], frame["bound"])
            frame["K"] = K
            logger.info(f"Least-squares rate constant K = {K:.6g}")
    return frame


def lemma_table(config: ExperimentConfig) -> pd.DataFrame:
    D_grid = config.study.D_grid or [config.D]
    rows = [
        lemma_checks(
            config.model, D, config.study.lemma_n, config.study.H, config.run.omega_grid
        ).as_row()
        for D in D_grid
    ]
    return rows_frame(rows)


def run_study(config: ExperimentConfig) -> Dict[str, pd.DataFrame]:
    logger.info(f"Running study on a {config.model.kind} model with D={config.model.dim}")
    tables = {
        "decomposition": decomposition_table(config),
        "rates": rate_table(config),
        "lemmas": lemma_table(config),
    }
    return {name: frame for name, frame in tables.items() if frame is not None}


@exit_on_error
def study_cli(
    config: Path = typer.Option(..., "--config", help="path to experiment config JSON"),
    seed: Optional[int] = typer.Option(None, help="override run.seed"),
    output_format: str = typer.Option("csv", "--format", help="csv or table"),
    report_dir: Optional[Path] = typer.Option(
        None, help="directory for decomposition.csv, rates.csv and lemmas.csv"
    ),
):
    if output_format not in OUTPUT_FORMATS:
        raise ConfigError("--format", f"expected one of {OUTPUT_FORMATS}, got `{output_format}`")
    experiment = ExperimentConfig.from_file(config, seed=seed)
    out_dir = experiment.output_path("report_dir", str(report_dir) if report_dir is not None else None)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)

    for name, frame in run_study(experiment).items():
        path = out_dir / f"{name}.csv" if out_dir is not None else None
        emit_report(frame, output_format, path, title=name)
