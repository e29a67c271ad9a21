"""
Best linear predictor from the normal equations beta Gamma = R, solved
directly; independent of the innovations recursion.
"""
from typing import Dict, List, Sequence

import numpy as np
import scipy.linalg

from flip.covariance import LagCovSet, assemble_block_covariance
from flip.errors import DimensionError, SingularCovarianceError
from flip.innovations.recursion import DEFAULT_PIVOT_TOL
from flip.innovations.state import InnovationsState


def oracle_best_linear_predictor(
    lagcovs: LagCovSet,
    dims: Sequence[int],
    target_dim: int,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> List[np.ndarray]:
    """
    beta_{n,1..n} for the history (X_{d_1,1}, ..., X_{d_n,n}); beta_{n,i}
    has shape target_dim x d_{n+1-i}.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if n == 0:
        return []
    if target_dim > lagcovs.dim:
        raise DimensionError(f"target_dim={target_dim} exceeds the {lagcovs.dim}-dimensional set")

    gamma = assemble_block_covariance(lagcovs, dims)
    eigenvalues = gamma.eigenvalues()
    largest = max(float(eigenvalues[-1]), 0.0)
    if largest == 0.0 or eigenvalues[0] <= pivot_tol * largest:
        raise SingularCovarianceError((n, 0), float(eigenvalues[0]))

    # cross covariance of X_{n+1} with (X_n, ..., X_1)
    R = np.hstack(
        [lagcovs.lag(n + 1 - t)[:target_dim, : dims[t - 1]] for t in range(n, 0, -1)]
    )
    coefficients = scipy.linalg.solve(gamma.matrix, R.T, assume_a="pos").T

    betas = []
    start = 0
    for i in range(1, n + 1):
        width = dims[n - i]
        betas.append(coefficients[:, start : start + width])
        start += width
    return betas


def oracle_coefficients(
    lagcovs: LagCovSet, dims: Sequence[int], pivot_tol: float = DEFAULT_PIVOT_TOL
) -> Dict[int, List[np.ndarray]]:
    """beta_{n,.} for n = 1..len(dims)-1, targets of dimension d_{n+1}."""
    dims = tuple(int(d) for d in dims)
    return {
        n: oracle_best_linear_predictor(lagcovs, dims[:n], dims[n], pivot_tol)
        for n in range(1, len(dims))
    }


def oracle_predict(betas: Sequence[np.ndarray], observations: np.ndarray) -> np.ndarray:
    """sum_i beta_{n,i} X_{n+1-i} over a batch of histories (..., n, p)."""
    observations = np.asarray(observations, dtype=float)
    n = observations.shape[-2]
    if len(betas) != n:
        raise DimensionError(f"{len(betas)} coefficients for {n} observations")
    if n == 0:
        raise DimensionError("The oracle needs at least one observation")
    prediction = 0.0
    for i, beta in enumerate(betas, start=1):
        prediction = prediction + observations[..., n - i, : beta.shape[1]] @ beta.T
    return prediction


def beta_theta_link_check(state: InnovationsState, beta_set: Dict[int, Sequence[np.ndarray]]) -> float:
    """
    Max entrywise residual of theta_{n,i} = sum_{j=1}^{i} beta_{n,j} theta_{n-j,i-j}
    with theta_{m,0} = I.
    """
    worst = 0.0
    for n, betas in beta_set.items():
        if n > state.n_max:
            continue
        for i in range(1, n + 1):
            rhs = sum(betas[j - 1] @ state.theta_block(n - j, i - j) for j in range(1, i + 1))
            worst = max(worst, float(np.abs(state.theta_block(n, i) - rhs).max()))
    return worst
