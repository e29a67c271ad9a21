"""
Lagged covariance operators C_{X;h} in basis coordinates.

Orientation: lag(h)[l, j] = E<X_0, nu_j><X_h, nu_l>, i.e. the matrix
E[X_{t+h} X_t^T]. Negative lags are transposes.
"""
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from flip.errors import ConvergenceError, DimensionError, StationarityError
from flip.hilbert import CoordOperator, CoordVector, OrthonormalBasis, nuclear_norm, operator_norm
from flip.models import FAR1, FMA, LinearProcessModel

ANALYTIC = "analytic"
EMPIRICAL = "empirical"

PSD_TOL = 1e-10
FAR1_TOL = 1e-12
FAR1_MAX_ITER = 100_000
# lags of a FAR(1) are kept until ||Phi||^h drops below this
FAR1_LAG_TOL = 1e-14

_HEADER = re.compile(r"#\s*lagcov\s+D=(\d+)\s+H=(\d+)(?:\s+provenance=(\S+))?(?:\s+vanishes_beyond=(\S+))?")


@dataclass(frozen=True, eq=False)
class LagCovSet:
    lags: Tuple[np.ndarray, ...]
    provenance: str = ANALYTIC
    vanishes_beyond: bool = False
    basis: Optional[OrthonormalBasis] = None

    def __post_init__(self):
        lags = []
        for h, lag in enumerate(self.lags):
            lag = np.array(lag, dtype=float)
            if lag.ndim != 2 or lag.shape[0] != lag.shape[1]:
                raise DimensionError(f"Lag {h} covariance must be square, got shape {lag.shape}")
            lag.setflags(write=False)
            lags.append(lag)
        if not lags:
            raise DimensionError("LagCovSet needs at least lag 0")
        if any(lag.shape != lags[0].shape for lag in lags):
            raise DimensionError("All lag covariances must share one dimension")
        object.__setattr__(self, "lags", tuple(lags))

        c0 = lags[0]
        scale = max(1.0, float(np.abs(c0).max()))
        if np.abs(c0 - c0.T).max() > PSD_TOL * scale:
            raise ValueError("Lag-0 covariance is not symmetric")
        if c0.size and np.linalg.eigvalsh(c0).min() < -PSD_TOL * scale:
            raise ValueError("Lag-0 covariance is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.lags[0].shape[0]

    @property
    def max_lag(self) -> int:
        return len(self.lags) - 1

    def lag(self, h: int) -> np.ndarray:
        if h < 0:
            return self.lag(-h).T
        if h > self.max_lag:
            if self.vanishes_beyond:
                return np.zeros((self.dim, self.dim))
            raise DimensionError(
                f"Lag {h} requested but the {self.provenance} set stops at H={self.max_lag}"
            )
        return self.lags[h]

    def operator(self, h: int) -> CoordOperator:
        return CoordOperator(self.lag(h), self.basis, self.basis)

    def covers(self, h: int) -> bool:
        return self.vanishes_beyond or h <= self.max_lag

    def project(self, D: int) -> "LagCovSet":
        if D > self.dim:
            raise DimensionError(f"Cannot project a {self.dim}-dimensional set to D={D}")
        return LagCovSet(
            tuple(lag[:D, :D] for lag in self.lags), self.provenance, self.vanishes_beyond, self.basis
        )

    def rotate(self, rotation: np.ndarray, basis: Optional[OrthonormalBasis] = None) -> "LagCovSet":
        """Coordinates along the columns of `rotation`: C_h -> R^T C_h R."""
        lags = []
        for lag in self.lags:
            rotated = rotation.T @ lag @ rotation
            lags.append(rotated)
        lags[0] = 0.5 * (lags[0] + lags[0].T)
        return LagCovSet(tuple(lags), self.provenance, self.vanishes_beyond, basis)

    def is_zero_beyond_lag0(self, tol: float = 0.0) -> bool:
        return all(np.abs(lag).max() <= tol for lag in self.lags[1:])


def analytic_lag_cov_fma(model: LinearProcessModel, h: int) -> CoordOperator:
    """sum_{j=0}^{q-h} gamma_{j+h} C_eps gamma_j^* with gamma_0 = I."""
    if h < 0:
        raise ValueError(f"Lag must be nonnegative, got {h}")
    gammas = [np.eye(model.dim)] + model.matrices
    q = len(gammas) - 1
    cov = np.zeros((model.dim, model.dim))
    c_eps = model.noise.covariance
    for j in range(0, q - h + 1):
        cov += gammas[j + h] @ c_eps @ gammas[j].T
    return CoordOperator(cov)


def _far1_covariance(phi: np.ndarray, c_eps: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    """Fixed point of C = Phi C Phi^* + C_eps."""
    cov = c_eps.copy()
    previous = nuclear_norm(CoordOperator(cov))
    for iteration in range(1, max_iter + 1):
        cov = phi @ cov @ phi.T + c_eps
        current = nuclear_norm(CoordOperator(cov))
        if abs(current - previous) < tol:
            logger.debug(f"FAR(1) covariance fixed point reached after {iteration} iterations")
            return 0.5 * (cov + cov.T)
        previous = current
    raise ConvergenceError(f"FAR(1) covariance did not converge within {max_iter} iterations")


def analytic_lag_cov_far1(
    model: LinearProcessModel, h: int, tol: float = FAR1_TOL, max_iter: int = FAR1_MAX_ITER
) -> CoordOperator:
    """C_{X;h} = Phi^h C_X."""
    if model.kind != FAR1:
        raise ValueError(f"Expected a FAR(1) model, got {model.kind}")
    if h < 0:
        raise ValueError(f"Lag must be nonnegative, got {h}")
    phi = model.matrices[0]
    if operator_norm(model.operators[0]) >= 1:
        raise StationarityError(operator_norm(model.operators[0]))
    cov = _far1_covariance(phi, model.noise.covariance, tol, max_iter)
    return CoordOperator(np.linalg.matrix_power(phi, h) @ cov)


def far1_default_max_lag(model: LinearProcessModel) -> int:
    phi_norm = operator_norm(model.operators[0])
    if phi_norm == 0:
        return 1
    return max(1, int(math.ceil(math.log(FAR1_LAG_TOL) / math.log(phi_norm))))


def analytic_lag_covs(
    model: LinearProcessModel,
    max_lag: Optional[int] = None,
    basis: Optional[OrthonormalBasis] = None,
) -> LagCovSet:
    """
    Exact lag covariances of a model.

    Moving averages declare that lags beyond their order vanish. A FAR(1) set
    holds at least `max_lag` lags and at least enough for ||Phi||^H < 1e-14.
    """
    if model.kind == FAR1:
        H = far1_default_max_lag(model)
        if max_lag is not None:
            H = max(H, max_lag)
        phi = model.matrices[0]
        cov = _far1_covariance(phi, model.noise.covariance, FAR1_TOL, FAR1_MAX_ITER)
        lags = [cov]
        for _ in range(H):
            lags.append(phi @ lags[-1])
        logger.info(f"Built {H + 1} analytic FAR(1) lag covariances")
        return LagCovSet(tuple(lags), ANALYTIC, False, basis)

    if model.kind == FMA:
        lags = [analytic_lag_cov_fma(model, h).entries for h in range(model.order + 1)]
    else:
        psis = [np.eye(model.dim)] + model.matrices
        c_eps = model.noise.covariance
        J = len(psis) - 1
        lags = [
            sum(psis[j + h] @ c_eps @ psis[j].T for j in range(0, J - h + 1))
            for h in range(J + 1)
        ]
    lags[0] = 0.5 * (lags[0] + lags[0].T)
    logger.info(f"Built {len(lags)} analytic {model.kind} lag covariances")
    return LagCovSet(tuple(lags), ANALYTIC, True, basis)


def _trajectory_array(trajectory: Union[Sequence[CoordVector], np.ndarray]) -> np.ndarray:
    if len(trajectory) and isinstance(trajectory[0], CoordVector):
        return np.vstack([c.coords for c in trajectory])
    return np.atleast_2d(np.asarray(trajectory, dtype=float))


def empirical_lag_cov(trajectory: Union[Sequence[CoordVector], np.ndarray], h: int) -> CoordOperator:
    """
    (1/n) sum_{t=1}^{n-h} (x_{t+h} - xbar)(x_t - xbar)^T.

    Divisor n and sample-mean centering keep the lag family PSD-compatible.
    """
    trajectory = _trajectory_array(trajectory)
    n = trajectory.shape[0]
    if h < 0:
        raise ValueError(f"Lag must be nonnegative, got {h}")
    if h >= n:
        raise DimensionError(f"Lag {h} needs more than {n} observations")
    centered = trajectory - trajectory.mean(axis=0)
    return CoordOperator(centered[h:].T @ centered[: n - h] / n)


def empirical_lag_covs(trajectory: Union[Sequence[CoordVector], np.ndarray], max_lag: int) -> LagCovSet:
    trajectory = _trajectory_array(trajectory)
    lags = [empirical_lag_cov(trajectory, h).entries for h in range(max_lag + 1)]
    lags[0] = 0.5 * (lags[0] + lags[0].T)
    return LagCovSet(tuple(lags), EMPIRICAL, False)


def projected_lag_cov(full: LagCovSet, D_out: int, D_in: int, h: int) -> CoordOperator:
    """P_{A_out} C_{X;h} P_{A_in}: the leading D_out x D_in block."""
    if D_out > full.dim or D_in > full.dim:
        raise DimensionError(
            f"Projection ({D_out}, {D_in}) exceeds the {full.dim}-dimensional set"
        )
    return CoordOperator(full.lag(h)[:D_out, :D_in])


def write_lag_covs(path: Union[str, Path], lagcovs: LagCovSet):
    with open(path, "w") as f:
        f.write(
            f"# lagcov D={lagcovs.dim} H={lagcovs.max_lag} "
            f"provenance={lagcovs.provenance} vanishes_beyond={str(lagcovs.vanishes_beyond).lower()}\n"
        )
        for h, lag in enumerate(lagcovs.lags):
            f.write(f"# lag {h}\n")
            for row in lag:
                f.write(",".join(repr(float(v)) for v in row))
                f.write("\n")


def read_lag_covs(path: Union[str, Path]) -> LagCovSet:
    with open(path) as f:
        match = _HEADER.match(f.readline().strip())
        if match is None:
            raise ValueError(f"{path}: missing `# lagcov D=<D> H=<H>` header")
        D, H = int(match.group(1)), int(match.group(2))
        provenance = match.group(3) or ANALYTIC
        vanishes = (match.group(4) or "false") == "true"
        rows = [line for line in f if line.strip() and not line.startswith("#")]

    if len(rows) != D * (H + 1):
        raise DimensionError(f"{path}: expected {D * (H + 1)} matrix rows, found {len(rows)}")
    values = np.array([[float(v) for v in row.split(",")] for row in rows])
    lags = tuple(values[h * D : (h + 1) * D] for h in range(H + 1))
    return LagCovSet(lags, provenance, vanishes)
