"""
Fixed-dimension innovations algorithm on a D-dimensional projection, its
moving-average shortcut, and the one-step predictors it produces.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from loguru import logger

from flip.covariance import LagCovSet
from flip.errors import DimensionError
from flip.hilbert import CoordOperator, CoordVector, operator_norm
from flip.innovations.recursion import DEFAULT_PIVOT_TOL, run_recursion
from flip.innovations.state import InnovationsState, InnovationsStateFixedD

ORDER_TOL = 1e-10


def innovations_fixed(
    lagcovs: LagCovSet, n_max: int, pivot_tol: float = DEFAULT_PIVOT_TOL
) -> InnovationsStateFixedD:
    """theta_{D,n,i} and V_{D,n} for n <= n_max, D = lagcovs.dim."""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    D = lagcovs.dim
    logger.info(f"Running innovations recursion with D={D}, n_max={n_max}")
    theta, V = run_recursion(lagcovs, (D,) * (n_max + 1), pivot_tol)
    return InnovationsStateFixedD(tuple((D,) * (n_max + 1)), tuple(theta), tuple(V))


def detect_fma_order(lagcovs: LagCovSet, q: int) -> int:
    """Largest j <= q whose projected lag covariance is nonzero, else 0."""
    for j in range(min(q, lagcovs.max_lag), 0, -1):
        if operator_norm(CoordOperator(lagcovs.lag(j))) > ORDER_TOL:
            return j
    return 0


def innovations_fma(
    lagcovs: LagCovSet, q_star: int, n_max: int, pivot_tol: float = DEFAULT_PIVOT_TOL
) -> InnovationsStateFixedD:
    """
    Same output as innovations_fixed when lags beyond q_star vanish, keeping
    only theta_{n,1..q*} once n > q*.
    """
    if q_star < 0:
        raise ValueError(f"q_star must be nonnegative, got {q_star}")
    for h in range(q_star + 1, lagcovs.max_lag + 1):
        norm = float(np.abs(lagcovs.lag(h)).max())
        if norm > ORDER_TOL:
            raise ValueError(f"Lag {h} covariance is nonzero ({norm:.3e}) beyond q*={q_star}")
    if not lagcovs.vanishes_beyond and lagcovs.max_lag < n_max:
        lagcovs = LagCovSet(lagcovs.lags, lagcovs.provenance, True, lagcovs.basis)

    D = lagcovs.dim
    logger.info(f"Running FMA({q_star}) innovations recursion with D={D}, n_max={n_max}")
    theta, V = run_recursion(lagcovs, (D,) * (n_max + 1), pivot_tol, max_order=q_star)
    return InnovationsStateFixedD(tuple((D,) * (n_max + 1)), tuple(theta), tuple(V), q_star)


@dataclass(frozen=True, eq=False)
class Predictions:
    """
    predictions[..., k, :] is hat X_{k+1} for k = 0..n and innovations[..., k, :]
    is X_{k+1} - hat X_{k+1} for k = 0..n-1; both are zero-padded beyond d_{k+1}.
    """

    dims: tuple
    predictions: np.ndarray
    innovations: np.ndarray

    @property
    def n(self) -> int:
        return self.innovations.shape[-2]

    @property
    def next(self) -> np.ndarray:
        """hat X_{n+1}, trimmed to d_{n+1}."""
        return self.predictions[..., -1, : self.dims[-1]]

    def innovation_norms(self) -> np.ndarray:
        return np.linalg.norm(self.innovations, axis=-1)


def one_step_predictions(state: InnovationsState, observations: np.ndarray) -> Predictions:
    """
    Forward substitution of innovations over a batch of histories.

    `observations` has shape (..., n, p) with p >= d_n; time k uses its
    leading d_k coordinates. Returns hat X_1..hat X_{n+1}.
    """
    observations = np.asarray(observations, dtype=float)
    if observations.ndim == 1:
        observations = observations[:, None]
    n = observations.shape[-2]
    if n > state.n_max:
        raise DimensionError(f"{n} observations but the state only reaches n_max={state.n_max}")
    dims = state.dims[: n + 1]
    width = max(dims)
    if n and observations.shape[-1] < max(dims[:n]):
        raise DimensionError(
            f"Observations have {observations.shape[-1]} coordinates, schedule needs {max(dims[:n])}"
        )

    batch = observations.shape[:-2]
    predictions = np.zeros(batch + (n + 1, width))
    innovations = np.zeros(batch + (n, width))
    for m in range(n + 1):
        d_next = dims[m]
        if m > 0:
            hat = np.zeros(batch + (d_next,))
            for i, block in enumerate(state.theta[m], start=1):
                d_in = dims[m - i]
                hat += innovations[..., m - i, :d_in] @ block.T
            predictions[..., m, :d_next] = hat
        if m < n:
            innovations[..., m, :d_next] = (
                observations[..., m, :d_next] - predictions[..., m, :d_next]
            )
    return Predictions(dims, predictions, innovations)


def predict_fixed(
    state: InnovationsState, observations: Union[Sequence[CoordVector], np.ndarray]
) -> Union[CoordVector, np.ndarray]:
    """hat X_{D,n+1} from X_{D,1}..X_{D,n}; hat X_{D,1} = 0."""
    basis = None
    if len(observations) and isinstance(observations[0], CoordVector):
        basis = observations[0].basis
        observations = np.vstack([c.coords for c in observations])
    if len(observations) == 0:
        observations = np.zeros((0, state.dims[0]))
    else:
        observations = np.asarray(observations, dtype=float).reshape(len(observations), -1)
    prediction = one_step_predictions(state, observations).next
    if basis is not None:
        return CoordVector(basis, prediction)
    return prediction


def v_limit_gap(state: InnovationsState, last: Optional[int] = None) -> float:
    """| ||V_n||_N - ||V_{n-1}||_N | at n = last (default n_max)."""
    n = state.n_max if last is None else last
    if n < 1:
        return 0.0
    return abs(state.v_nuclear(n) - state.v_nuclear(n - 1))
