"""
Prediction error of the fixed-dimension predictor split into the part lost by
projecting onto the first D eigenfunctions and the part left by the
recursion:

    E||X_{n+1} - hat X_{D,n+1}||^2 = sum_{i>D} lambda_i + ||V_{D,n}||_N

The squared nuclear norm is reported alongside the unsquared one.
"""
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from flip.evaluation.coordinates import EigenCoordinates, eigen_coordinates
from flip.evaluation.montecarlo import mean_and_stderr, simulate_replicates
from flip.hilbert import OrthonormalBasis
from flip.innovations import DEFAULT_PIVOT_TOL, InnovationsState, innovations_fixed, one_step_predictions
from flip.models import LinearProcessModel

DEFAULT_MC_RUNS = 2000
STDERR_BAND = 3.0
MONOTONE_TOL = 1e-9


@dataclass
class ErrorReport:
    D: int
    n: int
    tail_sum: float
    v_nuclear: float
    v_nuclear_squared: float
    mc_mse: float
    mc_stderr: float
    noise_floor: float

    @property
    def predicted_mse(self) -> float:
        return self.tail_sum + self.v_nuclear

    @property
    def residual(self) -> float:
        """mc_mse - (tail_sum + v_nuclear)."""
        return self.mc_mse - self.predicted_mse

    def within_band(self, k: float = STDERR_BAND) -> bool:
        return abs(self.residual) <= k * self.mc_stderr

    def as_row(self) -> dict:
        row = asdict(self)
        row["residual"] = self.residual
        return row


def squared_prediction_errors(
    state: InnovationsState,
    paths: np.ndarray,
    n_list: Sequence[int],
    noise: Optional[np.ndarray] = None,
) -> dict:
    """
    ||X_{n+1} - hat X_{n+1}||^2 per replicate in the coordinates of `paths`,
    with the predictor zero-padded to the full dimension. With `noise` the
    innovation eps_{n+1} is subtracted as well.
    """
    N = max(n_list)
    predictions = one_step_predictions(state, paths[:, :N, :]).predictions
    errors = {}
    for n in n_list:
        diff = paths[:, n, :].copy()
        diff[:, : predictions.shape[-1]] -= predictions[:, n, :]
        if noise is not None:
            diff -= noise[:, n, :]
        errors[n] = np.einsum("rj,rj->r", diff, diff)
    return errors


def _reports(
    coords: EigenCoordinates,
    state: InnovationsState,
    D: int,
    n_list: Sequence[int],
    mc_runs: int,
    seed: int,
) -> List[ErrorReport]:
    tail_sum = float(coords.eigenvalues[D:].sum())
    noise_floor = coords.model.noise.sigma2

    errors = {}
    if mc_runs > 0:
        paths, _ = simulate_replicates(coords.model, max(n_list) + 1, mc_runs, seed)
        errors = squared_prediction_errors(state, coords.rotate(paths), n_list)

    reports = []
    for n in n_list:
        v = state.v_nuclear(n)
        mse, stderr = mean_and_stderr(errors[n]) if mc_runs > 0 else (float("nan"), float("nan"))
        reports.append(ErrorReport(D, n, tail_sum, v, v**2, mse, stderr, noise_floor))
    return reports


def noise_floor_convergence(
    model: LinearProcessModel,
    D: int,
    n_list: Sequence[int],
    mc_runs: int = DEFAULT_MC_RUNS,
    seed: int = 0,
    basis: Optional[OrthonormalBasis] = None,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> List[ErrorReport]:
    """
    One recursion up to max(n_list) and one batch of trajectories; every
    report at n predicts X_{n+1} from X_1..X_n of the same replicates.
    """
    n_list = sorted(int(n) for n in n_list)
    if not n_list or n_list[0] < 1:
        raise ValueError(f"n_list must hold positive integers, got {n_list}")
    coords = eigen_coordinates(model, max(n_list), basis)
    if D > coords.ambient:
        raise ValueError(f"D={D} exceeds the ambient dimension {coords.ambient}")

    state = innovations_fixed(coords.lagcovs.project(D), max(n_list), pivot_tol)
    reports = _reports(coords, state, D, n_list, mc_runs, seed)

    v = [r.v_nuclear for r in reports]
    if any(b > a + MONOTONE_TOL for a, b in zip(v, v[1:])):
        logger.warning(f"||V_(D,n)||_N increased along n for D={D}: {v}")
    return reports


def error_decomposition(
    model: LinearProcessModel,
    D: int,
    n: int,
    mc_runs: int = DEFAULT_MC_RUNS,
    seed: int = 0,
    basis: Optional[OrthonormalBasis] = None,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> ErrorReport:
    report = noise_floor_convergence(model, D, [n], mc_runs, seed, basis, pivot_tol)[0]
    logger.info(
        f"D={D} n={n}: tail {report.tail_sum:.6g} + ||V||_N {report.v_nuclear:.6g} "
        f"vs Monte Carlo {report.mc_mse:.6g} +/- {report.mc_stderr:.2g}"
    )
    return report


def monotone_in_dimension(
    model: LinearProcessModel,
    D_list: Sequence[int],
    n: int,
    mc_runs: int = DEFAULT_MC_RUNS,
    seed: int = 0,
    basis: Optional[OrthonormalBasis] = None,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> List[ErrorReport]:
    """Decompositions over a D grid on common random numbers."""
    D_list = sorted(int(D) for D in D_list)
    coords = eigen_coordinates(model, n, basis)
    paths = None
    if mc_runs > 0:
        paths, _ = simulate_replicates(model, n + 1, mc_runs, seed)
        paths = coords.rotate(paths)

    reports = []
    for D in D_list:
        state = innovations_fixed(coords.lagcovs.project(D), n, pivot_tol)
        v = state.v_nuclear(n)
        mse, stderr = float("nan"), float("nan")
        if paths is not None:
            mse, stderr = mean_and_stderr(squared_prediction_errors(state, paths, [n])[n])
        reports.append(
            ErrorReport(
                D, n, float(coords.eigenvalues[D:].sum()), v, v**2, mse, stderr, model.noise.sigma2
            )
        )
    return reports


def is_monotone_in_dimension(reports: Sequence[ErrorReport], k: float = STDERR_BAND) -> bool:
    """mc_mse(D) >= mc_mse(D') - k stderr for every D < D'."""
    for i, small in enumerate(reports):
        for large in reports[i + 1 :]:
            if small.mc_mse < large.mc_mse - k * large.mc_stderr:
                return False
    return True
