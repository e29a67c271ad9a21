from dataclasses import dataclass
from typing import Optional

import numpy as np

from flip.covariance import CovarianceEigenbasis, LagCovSet, analytic_lag_covs, covariance_eigenbasis
from flip.hilbert import OrthonormalBasis
from flip.models import LinearProcessModel


@dataclass(frozen=True, eq=False)
class EigenCoordinates:
    """A model's lag covariances expressed along the eigenvectors of C_X."""

    model: LinearProcessModel
    eigenbasis: CovarianceEigenbasis
    lagcovs: LagCovSet

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eigenbasis.eigenvalues

    @property
    def rotation(self) -> np.ndarray:
        return self.eigenbasis.rotation

    @property
    def ambient(self) -> int:
        return self.lagcovs.dim

    def rotate(self, values: np.ndarray) -> np.ndarray:
        return self.eigenbasis.rotate_trajectory(values)

    def rotate_operator(self, matrix: np.ndarray) -> np.ndarray:
        return self.rotation.T @ matrix @ self.rotation


def eigen_coordinates(
    model: LinearProcessModel, max_lag: int, basis: Optional[OrthonormalBasis] = None
) -> EigenCoordinates:
    """Analytic lag covariances up to at least `max_lag`, rotated to the eigenbasis."""
    lagcovs = analytic_lag_covs(model, max_lag=max_lag, basis=basis)
    eigenbasis = covariance_eigenbasis(lagcovs.lag(0), basis)
    return EigenCoordinates(model, eigenbasis, eigenbasis.rotate_lag_covs(lagcovs))
