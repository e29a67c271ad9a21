"""
Simulate a trajectory of the configured model and write it as CSV with a
JSON metadata sidecar.
"""
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
import typer
from loguru import logger

from flip.config import ExperimentConfig
from flip.hilbert import reconstruct_rows
from flip.models import model_hash, simulate
from flip.utils import FLOAT_FORMAT, exit_on_error, trajectory_frame, write_csv, write_sidecar


def simulate_trajectory(config: ExperimentConfig) -> np.ndarray:
    logger.info(
        f"Simulating {config.run.n_max} steps of a {config.model.kind} model "
        f"with D={config.model.dim} (seed {config.run.seed})"
    )
    return simulate(config.model, config.run.n_max, config.run.seed)


def trajectory_curves(config: ExperimentConfig, trajectory: np.ndarray) -> pd.DataFrame:
    """Grid values sum_j x_j nu_j of every observation, one row per time."""
    basis = config.ambient_basis()
    values = reconstruct_rows(trajectory, basis)
    frame = pd.DataFrame(values, columns=[f"u{k}" for k in range(basis.grid.resolution)])
    frame.insert(0, "t", np.arange(1, len(trajectory) + 1))
    return frame


@exit_on_error
def simulate_cli(
    config: Path = typer.Option(..., "--config", help="path to experiment config JSON"),
    out: Optional[Path] = typer.Option(None, help="trajectory CSV, defaults to run.output"),
    seed: Optional[int] = typer.Option(None, help="override run.seed"),
    reconstruct: bool = typer.Option(
        False, help="write curve values on the basis grid instead of coordinates"
    ),
):
    experiment = ExperimentConfig.from_file(config, seed=seed)
    trajectory = simulate_trajectory(experiment)

    frame = trajectory_curves(experiment, trajectory) if reconstruct else trajectory_frame(trajectory)

    out_path = experiment.output_path("output", str(out) if out is not None else None)
    if out_path is None:
        typer.echo(frame.to_csv(index=False, float_format=FLOAT_FORMAT), nl=False)
        return

    write_csv(out_path, frame)
    write_sidecar(
        out_path,
        {
            "model_hash": model_hash(experiment.model),
            "seed": experiment.run.seed,
            "n": experiment.run.n_max,
            "D": experiment.model.dim,
            "kind": experiment.model.kind,
            "values": "curves" if reconstruct else "coordinates",
        },
    )
