"""
Covariance of the stacked, projected history (X_{d_n,n}, ..., X_{d_1,1}).
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from flip.covariance.lagged import LagCovSet
from flip.errors import DimensionError

BLOCK_PSD_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class BlockCovariance:
    dims: Tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        matrix = np.array(self.matrix, dtype=float)
        k = sum(dims)
        if matrix.shape != (k, k):
            raise DimensionError(f"Block matrix of shape {matrix.shape} does not match dims {dims}")
        scale = max(1.0, float(np.abs(matrix).max()))
        if np.abs(matrix - matrix.T).max() > BLOCK_PSD_TOL * scale:
            raise ValueError("Block covariance is not symmetric")
        matrix.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", matrix)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def k(self) -> int:
        return int(sum(self.dims))

    def _slice(self, time: int) -> slice:
        """Rows of time `time` (1-based); the stack starts with the latest time."""
        if not 1 <= time <= self.n:
            raise IndexError(f"time {time} outside 1..{self.n}")
        start = sum(self.dims[time:])
        return slice(start, start + self.dims[time - 1])

    def block(self, s: int, t: int) -> np.ndarray:
        """E[X_{d_s,s} X_{d_t,t}^T]."""
        return self.matrix[self._slice(s), self._slice(t)]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])


def assemble_block_covariance(lagcovs: LagCovSet, dims: Sequence[int]) -> BlockCovariance:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionError("Need at least one time step")
    if any(d < 1 or d > lagcovs.dim for d in dims):
        raise DimensionError(f"dims {dims} must lie in 1..{lagcovs.dim}")
    if any(b < a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"dims {dims} must be nondecreasing")

    n = len(dims)
    times = list(range(n, 0, -1))
    rows = []
    for s in times:
        row = [lagcovs.lag(s - t)[: dims[s - 1], : dims[t - 1]] for t in times]
        rows.append(np.hstack(row))
    matrix = np.vstack(rows)
    matrix = 0.5 * (matrix + matrix.T)

    block = BlockCovariance(dims, matrix)
    scale = max(1.0, float(np.abs(matrix).max()))
    if block.min_eigenvalue < -BLOCK_PSD_TOL * scale:
        raise ValueError(f"Block covariance is not PSD (min eigenvalue {block.min_eigenvalue:.3e})")
    return block
