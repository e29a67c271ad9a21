from typing import Optional, Sequence

import pandas as pd

from flip.evaluation.coordinates import eigen_coordinates
from flip.hilbert import CoordOperator, operator_norm
from flip.innovations import DEFAULT_PIVOT_TOL, Schedule, innovations_increasing
from flip.models import FAR1, LinearProcessModel, ma_coefficients


def theta_convergence(
    model: LinearProcessModel,
    schedule: Schedule,
    n_list: Sequence[int],
    lags: Optional[Sequence[int]] = None,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> pd.DataFrame:
    """
    ||theta_{n,i} - psi_i||_L with psi_i cut to the block theta_{n,i} acts on
    (d_{n+1} x d_{n+1-i}, eigen coordinates), one row per (n, i).

    `lags` defaults to 1..q for moving averages and 1..3 for FAR(1).
    """
    if model.kind == FAR1 and lags is None:
        lags = (1, 2, 3)
    if lags is None:
        lags = range(1, max(model.order, 1) + 1)
    lags = [int(i) for i in lags]
    N = max(n_list)

    coords = eigen_coordinates(model, N)
    state = innovations_increasing(coords.lagcovs, schedule.dims(N + 1), pivot_tol)
    psis = [coords.rotate_operator(psi) for psi in ma_coefficients(model, max(lags))]

    rows = []
    for n in n_list:
        for i in lags:
            if i > n:
                continue
            block = state.theta_block(n, i)
            target = psis[i][: block.shape[0], : block.shape[1]]
            rows.append(
                {
                    "n": n,
                    "i": i,
                    "d_out": block.shape[0],
                    "d_in": block.shape[1],
                    "distance": operator_norm(CoordOperator(block - target)),
                    "theta_norm": operator_norm(CoordOperator(block)),
                }
            )
    return pd.DataFrame(rows, columns=["n", "i", "d_out", "d_in", "distance", "theta_norm"])
