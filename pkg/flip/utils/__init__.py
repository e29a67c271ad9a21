from .utils import (
    FLOAT_FORMAT,
    coordinate_columns,
    exit_on_error,
    read_trajectory,
    trajectory_frame,
    worker_count,
    write_csv,
    write_sidecar,
    write_trajectory,
)

__all__ = [
    "FLOAT_FORMAT",
    "coordinate_columns",
    "exit_on_error",
    "read_trajectory",
    "trajectory_frame",
    "worker_count",
    "write_csv",
    "write_sidecar",
    "write_trajectory",
]
