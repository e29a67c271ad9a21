from dataclasses import dataclass
from typing import Optional

import numpy as np

from flip.hilbert import OrthonormalBasis


@dataclass(frozen=True, eq=False)
class NoiseSpec:
    """
    Functional white noise with covariance C_eps diagonal along the basis.

    eigenvalues[i] is the variance of <eps_n, nu_{i+1}>.
    """

    eigenvalues: np.ndarray
    basis: Optional[OrthonormalBasis] = None

    def __post_init__(self):
        eigenvalues = np.array(self.eigenvalues, dtype=float).ravel()
        if eigenvalues.size == 0:
            raise ValueError("Noise needs at least one eigenvalue")
        if np.any(eigenvalues <= 0):
            raise ValueError("Noise eigenvalues must be strictly positive")
        if np.any(np.diff(eigenvalues) > 0):
            raise ValueError("Noise eigenvalues must be nonincreasing")
        if self.basis is not None and eigenvalues.size > self.basis.size:
            raise ValueError(
                f"{eigenvalues.size} noise eigenvalues on a basis of size {self.basis.size}"
            )
        eigenvalues.setflags(write=False)
        object.__setattr__(self, "eigenvalues", eigenvalues)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    @property
    def sigma2(self) -> float:
        """E||eps_0||^2 = ||C_eps||_N."""
        return float(self.eigenvalues.sum())

    @property
    def covariance(self) -> np.ndarray:
        return np.diag(self.eigenvalues)


def simulate_noise(spec: NoiseSpec, n: int, seed: int) -> np.ndarray:
    """n independent Gaussian coordinate vectors, shape (n, D)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, spec.dim)) * np.sqrt(spec.eigenvalues)
