"""
The innovations recursion on a mixed-dimension history.

With d_1 <= ... <= d_{N+1} and K(s, t) the leading d_s x d_t block of
C_{X;s-t}:

    V_0 = K(1, 1)
    theta_{n,i} = (K(n+1, n+1-i)
                   - sum_{k=i+1}^{n} theta_{n,k} V_{n-k} theta_{n-i,k-i}^T) V_{n-i}^{-1}
    V_n = K(n+1, n+1) - sum_{i=1}^{n} theta_{n,i} V_{n-i} theta_{n,i}^T

computed for i = n, n-1, ..., 1. A constant schedule is the fixed-dimension
algorithm. With `max_order` = q*, rows n > q* only carry theta_{n,1..q*}.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from loguru import logger
from tqdm import tqdm

from flip.covariance import LagCovSet
from flip.errors import DimensionError, SingularCovarianceError
from flip.innovations.schedule import validate_dims

DEFAULT_PIVOT_TOL = 1e-10


def symmetric_inverse(matrix: np.ndarray, step: Tuple[int, int], pivot_tol: float) -> np.ndarray:
    """Inverse through eigh; fails if lambda_min <= pivot_tol * lambda_max."""
    eigenvalues, vectors = scipy.linalg.eigh(matrix)
    largest = max(float(eigenvalues[-1]), 0.0)
    smallest = float(eigenvalues[0])
    if largest == 0.0 or smallest <= pivot_tol * largest:
        raise SingularCovarianceError(step, smallest)
    return (vectors / eigenvalues) @ vectors.T


def _block(lagcovs: LagCovSet, dims: Sequence[int], s: int, t: int) -> np.ndarray:
    return lagcovs.lag(s - t)[: dims[s - 1], : dims[t - 1]]


def run_recursion(
    lagcovs: LagCovSet,
    dims: Sequence[int],
    pivot_tol: float = DEFAULT_PIVOT_TOL,
    max_order: Optional[int] = None,
) -> Tuple[List[Tuple[np.ndarray, ...]], List[np.ndarray]]:
    """
    Runs the recursion for n = 1..len(dims)-1 and returns (theta rows, V).

    A set whose lags h >= 1 all vanish short-circuits to theta = 0 and
    V_n = K(n+1, n+1).
    """
    dims = tuple(int(d) for d in dims)
    validate_dims(dims, lagcovs.dim)
    n_max = len(dims) - 1
    if not lagcovs.covers(n_max):
        raise DimensionError(
            f"Recursion up to n={n_max} needs lags up to {n_max}, set stops at H={lagcovs.max_lag}"
        )

    V = [np.array(_block(lagcovs, dims, 1, 1))]
    theta: List[Tuple[np.ndarray, ...]] = [()]

    if lagcovs.is_zero_beyond_lag0():
        logger.info("Lag covariances vanish beyond lag 0: all theta are zero")
        for n in range(1, n_max + 1):
            V.append(np.array(_block(lagcovs, dims, n + 1, n + 1)))
            theta.append(tuple(np.zeros((dims[n], dims[n - i])) for i in range(1, n + 1)))
        return theta, V

    inverses = [symmetric_inverse(V[0], (1, 1), pivot_tol)] if n_max >= 1 else []

    for n in tqdm(range(1, n_max + 1), desc="Innovations", disable=n_max < 200):
        width = n if max_order is None or n <= max_order else max_order
        row: List[Optional[np.ndarray]] = [None] * width
        for i in range(width, 0, -1):
            acc = np.array(_block(lagcovs, dims, n + 1, n + 1 - i))
            for k in range(i + 1, width + 1):
                if k - i > len(theta[n - i]):
                    continue
                acc -= row[k - 1] @ V[n - k] @ theta[n - i][k - i - 1].T
            row[i - 1] = acc @ inverses[n - i]

        v = np.array(_block(lagcovs, dims, n + 1, n + 1))
        for i in range(1, width + 1):
            v -= row[i - 1] @ V[n - i] @ row[i - 1].T
        v = 0.5 * (v + v.T)

        theta.append(tuple(row))
        V.append(v)
        if n < n_max:
            inverses.append(symmetric_inverse(v, (n + 1, 1), pivot_tol))
        logger.debug(f"Innovations step n={n}: tr V_n = {np.trace(v):.6g}")

    return theta, V
