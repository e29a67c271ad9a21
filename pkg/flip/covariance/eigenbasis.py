from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg
from loguru import logger

from flip.covariance.lagged import LagCovSet
from flip.errors import DimensionError
from flip.hilbert import CoordOperator, OrthonormalBasis

NEGATIVE_EIGENVALUE_TOL = 1e-8
SIGN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CovarianceEigenbasis:
    eigenvalues: np.ndarray
    rotation: np.ndarray
    basis: Optional[OrthonormalBasis] = None

    def tail_sum(self, D: int) -> float:
        """sum_{j > D} lambda_j."""
        return float(self.eigenvalues[D:].sum())

    def rotate_trajectory(self, trajectory: np.ndarray) -> np.ndarray:
        return np.asarray(trajectory) @ self.rotation

    def rotate_lag_covs(self, lagcovs: LagCovSet) -> LagCovSet:
        return lagcovs.rotate(self.rotation, self.basis)


def covariance_eigenbasis(
    C0: Union[CoordOperator, np.ndarray], basis: Optional[OrthonormalBasis] = None
) -> CovarianceEigenbasis:
    """
    Eigenpairs of the lag-0 covariance sorted decreasingly.

    Columns of `rotation` are eigenvectors, each with its first nonzero
    coordinate positive. With `basis` the rotated basis functions are built too.
    """
    entries = C0.entries if isinstance(C0, CoordOperator) else np.asarray(C0, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DimensionError(f"Covariance must be square, got shape {entries.shape}")
    if basis is not None and entries.shape[0] > basis.size:
        raise DimensionError(f"Covariance of size {entries.shape[0]} on a basis of size {basis.size}")

    eigenvalues, vectors = scipy.linalg.eigh(0.5 * (entries + entries.T))
    if eigenvalues.size and eigenvalues[0] < -NEGATIVE_EIGENVALUE_TOL:
        raise ValueError(
            f"Covariance is not positive semidefinite (eigenvalue {eigenvalues[0]:.3e})"
        )
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    vectors = vectors[:, order]

    for j in range(vectors.shape[1]):
        nonzero = np.flatnonzero(np.abs(vectors[:, j]) > SIGN_TOL)
        if nonzero.size and vectors[nonzero[0], j] < 0:
            vectors[:, j] = -vectors[:, j]

    logger.debug(f"Covariance eigenvalues: {eigenvalues}")
    rotated = basis.rotate(vectors) if basis is not None else None
    return CovarianceEigenbasis(eigenvalues, vectors, rotated)
