import functools
import json
import os
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
import typer
from loguru import logger

from flip.errors import ConfigError, DimensionError, FlipError

FLOAT_FORMAT = "%.17g"


def worker_count() -> int:
    """Worker processes allowed by FLIP_THREADS (default 1: run inline)."""
    raw = os.environ.get("FLIP_THREADS", "1")
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigError("FLIP_THREADS", f"expected a positive integer, got `{raw}`")
    if threads < 1:
        raise ConfigError("FLIP_THREADS", f"expected a positive integer, got `{raw}`")
    return threads


def coordinate_columns(dim: int, prefix: str = "x") -> list:
    return [f"{prefix}{j}" for j in range(1, dim + 1)]


def write_csv(path: Union[str, Path], frame: pd.DataFrame):
    """All floats at 17 significant digits."""
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Wrote {len(frame)} rows to {path}")


def trajectory_frame(trajectory: np.ndarray, prefix: str = "x") -> pd.DataFrame:
    """One row per time t = 1..n, one column per coordinate."""
    trajectory = np.atleast_2d(trajectory)
    frame = pd.DataFrame(trajectory, columns=coordinate_columns(trajectory.shape[1], prefix))
    frame.insert(0, "t", np.arange(1, len(trajectory) + 1))
    return frame


def write_trajectory(path: Union[str, Path], trajectory: np.ndarray, prefix: str = "x"):
    write_csv(path, trajectory_frame(trajectory, prefix))


def read_trajectory(path: Union[str, Path], dim: Optional[int] = None) -> np.ndarray:
    frame = pd.read_csv(path, float_precision="round_trip")
    columns = [c for c in frame.columns if c != "t"]
    values = frame[columns].to_numpy(dtype=float)
    if dim is not None and values.shape[1] != dim:
        raise DimensionError(f"{path} has {values.shape[1]} coordinates, expected {dim}")
    return values


def write_sidecar(path: Union[str, Path], meta: dict):
    sidecar = Path(f"{path}.meta.json")
    with open(sidecar, "w") as f:
        f.write(json.dumps(meta, indent=4, sort_keys=True))
    return sidecar


def exit_on_error(func):
    """
    Maps flip failures to exit codes: validation and config problems exit 2,
    numerical breakdowns exit 3.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ArithmeticError, np.linalg.LinAlgError) as e:
            logger.error(f"numerical failure: {e}")
            raise typer.Exit(code=3)
        except (FlipError, ValueError) as e:
            logger.error(str(e))
            raise typer.Exit(code=2)

    return wrapper
