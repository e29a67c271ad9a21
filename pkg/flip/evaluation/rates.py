"""
Convergence rate of the increasing-dimension predictor to the innovation:

    E||X_{n+1} - hat X_{d_{n+1},n+1} - eps_{n+1}||^2
        = O(sum_{j>m_n} ||pi_j||_L + sum_{j>d_{n-m_n}} lambda_j)

and the same bound divided by alpha_{d_n}.
"""
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from flip.covariance import LagCovSet, infimum_eigenvalue
from flip.evaluation.coordinates import eigen_coordinates
from flip.evaluation.decomposition import DEFAULT_MC_RUNS, squared_prediction_errors
from flip.evaluation.montecarlo import mean_and_stderr, simulate_replicates
from flip.innovations import DEFAULT_PIVOT_TOL, Schedule, innovations_increasing, rate_sequence
from flip.models import InverseRepresentation, LinearProcessModel, inverse_representation

DEFAULT_TRUNCATION = 200


@dataclass
class RateBound:
    n: int
    m_n: int
    d_n: int
    d_lagged: int
    pi_tail: float
    lambda_tail: float
    bound: float
    alpha: Optional[float] = None
    scaled: Optional[float] = None

    def as_row(self) -> dict:
        return asdict(self)


def rate_bound(
    inverse: InverseRepresentation,
    schedule: Schedule,
    eigenvalues: Sequence[float],
    n: int,
    m_of_n: Callable[[int], int] = rate_sequence("ceil-sqrt"),
    lagcovs: Optional[LagCovSet] = None,
) -> RateBound:
    """
    `eigenvalues` are lambda_1 >= lambda_2 >= ...; with eigen-coordinate
    `lagcovs` alpha_{d_n} and the scaled bound are filled in too.
    """
    m_n = int(m_of_n(n))
    if not 0 <= m_n < n:
        raise ValueError(f"m_n = {m_n} must satisfy 0 <= m_n < n = {n}")
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    d_n = schedule(n)
    d_lagged = schedule(n - m_n)

    pi_tail = inverse.tail(m_n)
    lambda_tail = float(eigenvalues[d_lagged:].sum())
    bound = pi_tail + lambda_tail

    alpha = scaled = None
    if lagcovs is not None:
        alpha = infimum_eigenvalue(lagcovs.project(d_n))
        scaled = bound / alpha if alpha > 0 else float("inf")
    return RateBound(n, m_n, d_n, d_lagged, pi_tail, lambda_tail, bound, alpha, scaled)


def model_rate_bounds(
    model: LinearProcessModel,
    schedule: Schedule,
    n_list: Sequence[int],
    m_of_n: Callable[[int], int] = rate_sequence("ceil-sqrt"),
    truncation: int = DEFAULT_TRUNCATION,
    with_alpha: bool = True,
):
    coords = eigen_coordinates(model, 1)
    inverse = inverse_representation(model, truncation)
    lagcovs = coords.lagcovs if with_alpha else None
    return [
        rate_bound(inverse, schedule, coords.eigenvalues, n, m_of_n, lagcovs) for n in n_list
    ]


def excess_error_mc(
    model: LinearProcessModel,
    schedule: Schedule,
    n: int,
    mc_runs: int = DEFAULT_MC_RUNS,
    seed: int = 0,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> Tuple[float, float]:
    """Mean and standard error of ||X_{n+1} - hat X_{d_{n+1},n+1} - eps_{n+1}||^2."""
    return excess_error_series(model, schedule, [n], mc_runs, seed, pivot_tol)[0]


def excess_error_series(
    model: LinearProcessModel,
    schedule: Schedule,
    n_list: Sequence[int],
    mc_runs: int = DEFAULT_MC_RUNS,
    seed: int = 0,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> list:
    N = max(n_list)
    coords = eigen_coordinates(model, N)
    state = innovations_increasing(coords.lagcovs, schedule.dims(N + 1), pivot_tol)
    paths, noise = simulate_replicates(model, N + 1, mc_runs, seed)
    errors = squared_prediction_errors(state, coords.rotate(paths), n_list, coords.rotate(noise))
    results = [mean_and_stderr(errors[n]) for n in n_list]
    for n, (mean, stderr) in zip(n_list, results):
        logger.info(f"n={n} d_(n+1)={schedule(n + 1)}: excess error {mean:.6g} +/- {stderr:.2g}")
    return results


def calibrate_rate_constant(means: Sequence[float], bounds: Sequence[float]) -> float:
    """Least-squares K in mean ~ K * bound."""
    means = np.asarray(means, dtype=float)
    bounds = np.asarray(bounds, dtype=float)
    denominator = float(bounds @ bounds)
    if denominator == 0:
        raise ValueError("All rate bounds are zero; the constant is undetermined")
    return float(bounds @ means) / denominator
