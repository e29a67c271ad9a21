"""
Innovations algorithm on projections whose dimension d_n grows with n.

Blocks stay rectangular: theta_{n,i} maps the d_{n+1-i} coordinates of the
innovation at time n+1-i to the d_{n+1} coordinates of the target.
"""
from typing import Optional, Sequence, Union

import numpy as np
from loguru import logger

from flip.covariance import LagCovSet
from flip.innovations.fixed import one_step_predictions
from flip.innovations.recursion import DEFAULT_PIVOT_TOL, run_recursion
from flip.innovations.schedule import Schedule
from flip.innovations.state import InnovationsStateIncreasing


def innovations_increasing(
    lagcovs: LagCovSet,
    schedule: Union[Schedule, Sequence[int]],
    pivot_tol: float = DEFAULT_PIVOT_TOL,
    n_max: Optional[int] = None,
) -> InnovationsStateIncreasing:
    """
    `schedule` is either (d_1, ..., d_{n_max+1}) or a Schedule evaluated up to
    n_max + 1.
    """
    if isinstance(schedule, Schedule):
        if n_max is None:
            raise ValueError("n_max is required with a Schedule")
        dims = schedule.dims(n_max + 1)
    else:
        dims = tuple(int(d) for d in schedule)
    if not dims:
        raise ValueError("Empty schedule")
    logger.info(f"Running increasing-dimension innovations recursion, d = {dims[0]}..{dims[-1]}")
    theta, V = run_recursion(lagcovs, dims, pivot_tol)
    return InnovationsStateIncreasing(dims, tuple(theta), tuple(V))


def predict_increasing(state: InnovationsStateIncreasing, observations: np.ndarray) -> np.ndarray:
    """hat X_{d_{n+1},n+1} in the leading d_{n+1} coordinates."""
    return one_step_predictions(state, observations).next

