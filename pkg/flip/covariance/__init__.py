from .lagged import (
    ANALYTIC,
    EMPIRICAL,
    LagCovSet,
    analytic_lag_cov_far1,
    analytic_lag_cov_fma,
    analytic_lag_covs,
    empirical_lag_cov,
    empirical_lag_covs,
    projected_lag_cov,
    read_lag_covs,
    write_lag_covs,
)
from .block import BlockCovariance, assemble_block_covariance
from .spectral import (
    SpectralDensity,
    infimum_eigenvalue,
    omega_grid,
    spectral_density,
    spectral_duality_check,
    write_spectral_csv,
)
from .eigenbasis import CovarianceEigenbasis, covariance_eigenbasis

__all__ = [
    "ANALYTIC",
    "EMPIRICAL",
    "LagCovSet",
    "analytic_lag_cov_far1",
    "analytic_lag_cov_fma",
    "analytic_lag_covs",
    "empirical_lag_cov",
    "empirical_lag_covs",
    "projected_lag_cov",
    "read_lag_covs",
    "write_lag_covs",
    "BlockCovariance",
    "assemble_block_covariance",
    "SpectralDensity",
    "infimum_eigenvalue",
    "omega_grid",
    "spectral_density",
    "spectral_duality_check",
    "write_spectral_csv",
    "CovarianceEigenbasis",
    "covariance_eigenbasis",
]
