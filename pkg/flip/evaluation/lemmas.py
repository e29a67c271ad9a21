"""
Executable checks of three facts the convergence proofs lean on:

  cross-covariance   |<C_{X;h} nu_j, nu_l>| <= sqrt(lambda_j lambda_l)
  block-spectrum     lambda_min(Gamma_{D,n}) >= 2 pi alpha_D
  positive-density   alpha_D > 0

Failures are results, not exceptions.
"""
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from loguru import logger

from flip.covariance import assemble_block_covariance, infimum_eigenvalue
from flip.covariance.spectral import ALPHA_FLOOR, DEFAULT_OMEGA_GRID
from flip.evaluation.coordinates import eigen_coordinates
from flip.hilbert import OrthonormalBasis
from flip.models import LinearProcessModel

CROSS_COVARIANCE_TOL = 1e-8
BLOCK_SPECTRUM_TOL = 1e-6


@dataclass
class LemmaReport:
    D: int
    n: int
    H: int
    cross_covariance_margin: float
    cross_covariance_ok: bool
    block_min_eigenvalue: float
    block_margin: float
    block_spectrum_ok: bool
    alpha: float
    positive_density_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.cross_covariance_ok and self.block_spectrum_ok and self.positive_density_ok

    def as_row(self) -> dict:
        row = asdict(self)
        for key in ("cross_covariance_ok", "block_spectrum_ok", "positive_density_ok"):
            row[key] = "pass" if row[key] else "fail"
        return row


def lemma_checks(
    model: LinearProcessModel,
    D: int,
    n: int,
    H: int,
    omega_grid_size: int = DEFAULT_OMEGA_GRID,
    basis: Optional[OrthonormalBasis] = None,
) -> LemmaReport:
    coords = eigen_coordinates(model, max(H, n), basis)
    lagcovs = coords.lagcovs.project(D)
    root = np.sqrt(coords.eigenvalues[:D])
    envelope = np.outer(root, root)

    cross_margin = max(
        float((np.abs(lagcovs.lag(h)) - envelope).max()) for h in range(0, H + 1)
    )

    alpha = infimum_eigenvalue(lagcovs, omega_grid_size)
    block_min = assemble_block_covariance(lagcovs, (D,) * n).min_eigenvalue
    block_margin = block_min - 2 * np.pi * alpha

    report = LemmaReport(
        D=D,
        n=n,
        H=H,
        cross_covariance_margin=cross_margin,
        cross_covariance_ok=cross_margin <= CROSS_COVARIANCE_TOL,
        block_min_eigenvalue=block_min,
        block_margin=float(block_margin),
        block_spectrum_ok=bool(block_margin >= -BLOCK_SPECTRUM_TOL),
        alpha=alpha,
        positive_density_ok=alpha > ALPHA_FLOOR,
    )
    if not report.all_ok:
        logger.warning(f"Lemma checks failed for D={D}, n={n}: {report.as_row()}")
    return report
