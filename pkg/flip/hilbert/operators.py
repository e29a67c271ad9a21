"""
Bounded operators in basis coordinates.

entries[l, j] = <A nu_j^in, nu_l^out>, so applying A to coordinates is a
matrix-vector product and A* is the transpose.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from flip.errors import DimensionError
from flip.hilbert.basis import CoordVector, OrthonormalBasis

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CoordOperator:
    entries: np.ndarray
    out_basis: Optional[OrthonormalBasis] = None
    in_basis: Optional[OrthonormalBasis] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2:
            raise DimensionError(f"Operator entries must be a matrix, got ndim={entries.ndim}")
        if self.out_basis is not None and entries.shape[0] > self.out_basis.size:
            raise DimensionError("Operator output dimension exceeds its basis")
        if self.in_basis is not None and entries.shape[1] > self.in_basis.size:
            raise DimensionError("Operator input dimension exceeds its basis")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def out_dim(self) -> int:
        return self.entries.shape[0]

    @property
    def in_dim(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def identity(cls, dim: int, basis: Optional[OrthonormalBasis] = None):
        return cls(np.eye(dim), basis, basis)

    @classmethod
    def zeros(cls, out_dim: int, in_dim: int):
        return cls(np.zeros((out_dim, in_dim)))

    def adjoint(self) -> "CoordOperator":
        return CoordOperator(self.entries.T, self.in_basis, self.out_basis)

    def compose(self, other: "CoordOperator") -> "CoordOperator":
        """self after other."""
        if self.in_dim != other.out_dim:
            raise DimensionError(f"Cannot compose {self.entries.shape} with {other.entries.shape}")
        return CoordOperator(self.entries @ other.entries, self.out_basis, other.in_basis)

    def apply(self, x: CoordVector) -> CoordVector:
        if x.dim != self.in_dim:
            raise DimensionError(f"Operator expects {self.in_dim} coordinates, got {x.dim}")
        return CoordVector(self.out_basis or x.basis, self.entries @ x.coords)

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        return self.out_dim == self.in_dim and np.abs(self.entries - self.entries.T).max() <= tol

    def truncate(self, out_dim: int, in_dim: int) -> "CoordOperator":
        """P_out A P_in: coordinates make the projection a leading block."""
        if out_dim > self.out_dim or in_dim > self.in_dim:
            raise DimensionError(
                f"Cannot truncate {self.entries.shape} operator to ({out_dim}, {in_dim})"
            )
        return CoordOperator(self.entries[:out_dim, :in_dim], self.out_basis, self.in_basis)


def tensor(x: CoordVector, y: CoordVector) -> CoordOperator:
    """x (x) y, the rank-one operator z -> <x, z> y."""
    return CoordOperator(np.outer(y.coords, x.coords), y.basis, x.basis)


def operator_norm(A: CoordOperator) -> float:
    if A.entries.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(A.entries)[0])


def nuclear_norm(A: CoordOperator) -> float:
    if A.entries.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(A.entries).sum())
