"""
Spectral density matrices f[w] = (1/2pi) sum_h e^{-ihw} C_h on a uniform grid
over (-pi, pi], and the infimum eigenvalue alpha_D.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from loguru import logger

from flip.covariance.lagged import LagCovSet

DEFAULT_OMEGA_GRID = 512
REFINE_TOL = 1e-8
MAX_OMEGA_GRID = 2**16
# alpha at or below this is reported as the non-invertible boundary
ALPHA_FLOOR = 1e-10


def omega_grid(size: int) -> np.ndarray:
    """w_k = -pi + 2 pi (k + 1) / size, k = 0..size-1."""
    if size < 2:
        raise ValueError(f"omega grid needs at least 2 points, got {size}")
    return -np.pi + 2 * np.pi * (np.arange(size) + 1) / size


def _density(lagcovs: LagCovSet, omegas: np.ndarray) -> np.ndarray:
    H = lagcovs.max_lag
    lags = np.stack([lagcovs.lag(h) for h in range(1, H + 1)]) if H > 0 else None
    f = np.broadcast_to(lagcovs.lag(0), (omegas.size, lagcovs.dim, lagcovs.dim)).astype(complex)
    if lags is not None:
        phases = np.exp(-1j * np.outer(omegas, np.arange(1, H + 1)))
        forward = np.einsum("wh,hij->wij", phases, lags)
        f = f + forward + np.conj(np.transpose(forward, (0, 2, 1)))
    f = f / (2 * np.pi)
    return 0.5 * (f + np.conj(np.transpose(f, (0, 2, 1))))


@dataclass(frozen=True, eq=False)
class SpectralDensity:
    omegas: np.ndarray
    matrices: np.ndarray
    alpha: float

    @property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues per grid point, shape (N, D)."""
        return np.linalg.eigvalsh(self.matrices)

    @property
    def grid_minimum(self) -> float:
        return float(self.eigenvalues[:, 0].min())

    @property
    def is_positive(self) -> bool:
        return self.alpha > ALPHA_FLOOR


def infimum_eigenvalue(
    lagcovs: LagCovSet, grid_size: int = DEFAULT_OMEGA_GRID, tol: float = REFINE_TOL
) -> float:
    """
    Grid minimum of the smallest eigenvalue of f[w], refined by doubling the
    grid until the minimum moves by less than `tol`.
    """
    size = grid_size
    current = float(np.linalg.eigvalsh(_density(lagcovs, omega_grid(size)))[:, 0].min())
    while size < MAX_OMEGA_GRID:
        size *= 2
        refined = float(np.linalg.eigvalsh(_density(lagcovs, omega_grid(size)))[:, 0].min())
        converged = abs(refined - current) < tol
        current = min(current, refined)
        if converged:
            break
    else:
        logger.warning(f"alpha refinement stopped at the {MAX_OMEGA_GRID}-point grid cap")
    return current


def spectral_density(
    lagcovs: LagCovSet, omega_grid_size: int = DEFAULT_OMEGA_GRID, refine: bool = True
) -> SpectralDensity:
    if not lagcovs.vanishes_beyond:
        logger.info(f"Spectral density truncated at lag H={lagcovs.max_lag}")
    omegas = omega_grid(omega_grid_size)
    matrices = _density(lagcovs, omegas)
    alpha = float(np.linalg.eigvalsh(matrices)[:, 0].min())
    if refine:
        alpha = min(alpha, infimum_eigenvalue(lagcovs, omega_grid_size))
    if alpha <= ALPHA_FLOOR:
        logger.warning(f"alpha_D = {alpha:.3e}: spectral density is singular (non-invertible boundary)")
    return SpectralDensity(omegas, matrices, alpha)


def spectral_duality_check(lagcovs: LagCovSet, spectral: SpectralDensity, h: int) -> float:
    """Max entrywise error between C_h and the quadrature of f[w] e^{ihw}."""
    weight = 2 * np.pi / spectral.omegas.size
    phases = np.exp(1j * h * spectral.omegas)
    recovered = weight * np.einsum("w,wij->ij", phases, spectral.matrices)
    return float(np.abs(recovered - lagcovs.lag(h)).max())


def write_spectral_csv(path: Union[str, Path], spectral: SpectralDensity):
    """One row per omega: omega, then eigenvalues in ascending order."""
    eigenvalues = spectral.eigenvalues
    frame = pd.DataFrame(
        eigenvalues, columns=[f"eigenvalue_{i + 1}" for i in range(eigenvalues.shape[1])]
    )
    frame.insert(0, "omega", spectral.omegas)
    frame.to_csv(path, index=False, float_format="%.17g")
