"""
One-step predictions for an observed trajectory, dispatched on the
algorithm section of an experiment config.
"""
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd
import typer
from loguru import logger

from flip.config import ExperimentConfig
from flip.covariance import LagCovSet, analytic_lag_covs
from flip.errors import ConfigError
from flip.evaluation.coordinates import eigen_coordinates
from flip.innovations import (
    InnovationsState,
    detect_fma_order,
    dump_state,
    innovations_fixed,
    innovations_fma,
    innovations_increasing,
    one_step_predictions,
)
from flip.models import FAR1
from flip.utils import FLOAT_FORMAT, coordinate_columns, exit_on_error, read_trajectory, write_csv


def analysis_coordinates(config: ExperimentConfig, max_lag: int) -> Tuple[LagCovSet, Optional[np.ndarray]]:
    """Lag covariances in the analysis basis and the rotation into it, if any."""
    if config.basis.kind == "covariance-eigenbasis":
        coords = eigen_coordinates(config.model, max_lag)
        return coords.lagcovs, coords.rotation
    return analytic_lag_covs(config.model, max_lag=max_lag), None


def build_state(config: ExperimentConfig, lagcovs: LagCovSet, n_max: int) -> InnovationsState:
    kind = config.algorithm.kind
    pivot_tol = config.run.pivot_tol
    if kind == "increasing":
        return innovations_increasing(lagcovs, config.schedule(), pivot_tol, n_max=n_max)

    projected = lagcovs.project(config.D)
    if kind == "fma":
        if config.model.kind == FAR1:
            raise ConfigError("algorithm.kind", "fma needs a finite-order moving-average model")
        q_star = detect_fma_order(projected, config.model.order)
        logger.info(f"Effective order q*={q_star} at D={config.D}")
        return innovations_fma(projected, q_star, n_max, pivot_tol)
    return innovations_fixed(projected, n_max, pivot_tol)


def predict_trajectory(
    config: ExperimentConfig, trajectory: np.ndarray, dump_state_path: Optional[Path] = None
) -> pd.DataFrame:
    """
    Rows n = 1..N+1 hold hat X_n and, for n <= N, ||X_n - hat X_n||.
    Coordinates beyond d_n are left empty.
    """
    N = len(trajectory)
    if N > config.run.n_max:
        logger.warning(f"Trajectory has {N} observations, predicting from the first {config.run.n_max}")
        N = config.run.n_max
    trajectory = trajectory[:N]

    lagcovs, rotation = analysis_coordinates(config, N)
    if rotation is not None:
        trajectory = trajectory @ rotation
    state = build_state(config, lagcovs, N)
    if dump_state_path is not None:
        dump_state(dump_state_path, state)
        logger.info(f"Dumped innovations state to {dump_state_path}")

    result = one_step_predictions(state, trajectory)
    width = result.predictions.shape[-1]
    values = np.full((N + 1, width), np.nan)
    for k, d in enumerate(result.dims):
        values[k, :d] = result.predictions[k, :d]

    frame = pd.DataFrame(values, columns=coordinate_columns(width))
    frame.insert(0, "n", np.arange(1, N + 2))
    norms = np.full(N + 1, np.nan)
    norms[:N] = result.innovation_norms()
    frame["innovation_norm"] = norms
    return frame


@exit_on_error
def predict_cli(
    trajectory_path: Path = typer.Argument(..., help="trajectory CSV as written by `flip simulate`"),
    config: Path = typer.Option(..., "--config", help="path to experiment config JSON"),
    out: Optional[Path] = typer.Option(None, help="predictions CSV, defaults to run.predictions"),
    dump_state_path: Optional[Path] = typer.Option(
        None, "--dump-state", help="write theta and V blocks as JSON"
    ),
    seed: Optional[int] = typer.Option(None, help="override run.seed"),
):
    experiment = ExperimentConfig.from_file(config, seed=seed)
    if not trajectory_path.exists():
        raise ConfigError("trajectory", f"file `{trajectory_path}` does not exist")
    trajectory = read_trajectory(trajectory_path, experiment.model.dim)

    state_path = dump_state_path if dump_state_path is not None else experiment.output_path("state")
    frame = predict_trajectory(experiment, trajectory, state_path)

    out_path = experiment.output_path("predictions", str(out) if out is not None else None)
    if out_path is None:
        typer.echo(frame.to_csv(index=False, float_format=FLOAT_FORMAT), nl=False)
    else:
        write_csv(out_path, frame)
