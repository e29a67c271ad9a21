"""
Orthonormal bases of L^2([0,1]) on a grid and the coordinate map T.

T sends x to (<x, nu_1>, ..., <x, nu_D>); with the rectangle rule it is an
isometry on span(nu_1, ..., nu_D) up to rounding.
"""
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from loguru import logger

from flip.errors import DimensionError, GridMismatchError
from flip.hilbert.grid import Grid, GridFunction

ORTHONORMAL_TOL = 1e-8
BASIS_KINDS = ("fourier", "covariance-eigenbasis", "user-supplied")

_HEADER = re.compile(r"#\s*basis\s+kind=(\S+)\s+D=(\d+)\s+resolution=(\d+)")


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    grid: Grid
    functions: tuple
    kind: str = "user-supplied"

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ValueError(f"Unknown basis kind `{self.kind}`, expected one of {BASIS_KINDS}")
        functions = tuple(self.functions)
        if len(functions) == 0:
            raise DimensionError("A basis needs at least one function")
        if len(functions) > self.grid.resolution:
            raise DimensionError(
                f"Basis size {len(functions)} exceeds grid resolution {self.grid.resolution}"
            )
        for f in functions:
            if f.grid != self.grid:
                raise GridMismatchError("All basis functions must share the basis grid")
        object.__setattr__(self, "functions", functions)

        deviation = np.abs(self.gram_matrix() - np.eye(len(functions))).max()
        if deviation > ORTHONORMAL_TOL:
            raise ValueError(
                f"Basis is not orthonormal: Gram matrix deviates from identity by {deviation:.3e}"
            )

    @property
    def size(self) -> int:
        return len(self.functions)

    @property
    def matrix(self) -> np.ndarray:
        """Rows are the sampled basis functions."""
        return np.vstack([f.values for f in self.functions])

    def gram_matrix(self) -> np.ndarray:
        values = np.vstack([f.values for f in self.functions])
        return self.grid.spacing * values @ values.T

    def rotate(self, rotation: np.ndarray, kind: str = "covariance-eigenbasis"):
        """New basis whose j-th function is sum_i rotation[i, j] nu_i."""
        rotation = np.asarray(rotation, dtype=float)
        if rotation.shape[0] > self.size:
            raise DimensionError(
                f"Rotation acts on {rotation.shape[0]} coordinates, basis has {self.size}"
            )
        values = rotation.T @ self.matrix[: rotation.shape[0]]
        return OrthonormalBasis(
            self.grid, tuple(GridFunction(self.grid, row) for row in values), kind
        )


@dataclass(frozen=True, eq=False)
class CoordVector:
    """
    Coordinates of P_D x on the leading D functions of `basis`; D is
    len(coords) and may be smaller than the basis.
    """

    basis: OrthonormalBasis
    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float).ravel()
        if coords.size > self.basis.size:
            raise DimensionError(
                f"{coords.size} coordinates on a basis of size {self.basis.size}"
            )
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return self.coords.size


def fourier_basis(grid: Grid, D: int) -> OrthonormalBasis:
    """1, sqrt(2) cos(2 pi k t), sqrt(2) sin(2 pi k t), ..."""
    if D > grid.resolution:
        raise DimensionError(f"D={D} exceeds grid resolution {grid.resolution}")
    if D < 1:
        raise DimensionError(f"D must be positive, got {D}")
    if D % 2 == 0:
        logger.debug(f"Fourier basis with even D={D} ends on an unpaired cosine")

    t = grid.points
    functions = []
    for idx in range(D):
        if idx == 0:
            values = np.ones_like(t)
        elif idx % 2 == 1:
            values = np.sqrt(2.0) * np.cos(2 * np.pi * ((idx + 1) // 2) * t)
        else:
            values = np.sqrt(2.0) * np.sin(2 * np.pi * (idx // 2) * t)
        functions.append(GridFunction(grid, values))
    return OrthonormalBasis(grid, tuple(functions), "fourier")


def gram_schmidt(functions: Sequence[GridFunction], kind: str = "user-supplied") -> OrthonormalBasis:
    """
    Re-orthonormalize functions under the grid quadrature.

    Two passes of modified Gram-Schmidt; linearly dependent inputs raise.
    """
    if len(functions) == 0:
        raise DimensionError("No functions to orthonormalize")
    grid = functions[0].grid
    h = grid.spacing
    vectors = [np.array(f.values, dtype=float) for f in functions]
    for f in functions:
        if f.grid != grid:
            raise GridMismatchError("All functions must share one grid")

    out = []
    for idx, v in enumerate(vectors):
        for _ in range(2):
            for q in out:
                v = v - h * np.dot(q, v) * q
        length = np.sqrt(h * np.dot(v, v))
        if length < 1e-12:
            raise DimensionError(f"Function {idx} is linearly dependent on its predecessors")
        out.append(v / length)
    return OrthonormalBasis(grid, tuple(GridFunction(grid, v) for v in out), kind)


def project(x: GridFunction, basis: OrthonormalBasis, D: Optional[int] = None) -> CoordVector:
    if D is None:
        D = basis.size
    if D > basis.size:
        raise DimensionError(f"D={D} exceeds basis size {basis.size}")
    if x.grid != basis.grid:
        raise GridMismatchError("Function and basis live on different grids")
    coords = basis.grid.spacing * basis.matrix[:D] @ x.values
    return CoordVector(basis, coords)


def reconstruct(c: CoordVector) -> GridFunction:
    values = c.coords @ c.basis.matrix[: c.dim]
    return GridFunction(c.basis.grid, values)


def reconstruct_rows(coords: np.ndarray, basis: OrthonormalBasis) -> np.ndarray:
    """Grid values for every row of a (n, d) coordinate array."""
    coords = np.atleast_2d(coords)
    return coords @ basis.matrix[: coords.shape[1]]


def write_basis(path: Union[str, Path], basis: OrthonormalBasis):
    with open(path, "w") as f:
        f.write(
            f"# basis kind={basis.kind} D={basis.size} resolution={basis.grid.resolution}\n"
        )
        for func in basis.functions:
            f.write(",".join(repr(float(v)) for v in func.values))
            f.write("\n")


def read_basis(path: Union[str, Path]) -> OrthonormalBasis:
    """Reads a basis file; user-supplied functions are re-orthonormalized."""
    with open(path) as f:
        header = f.readline()
        match = _HEADER.match(header.strip())
        if match is None:
            raise ValueError(f"{path}: missing `# basis kind=<tag> D=<n> resolution=<m>` header")
        kind, D, resolution = match.group(1), int(match.group(2)), int(match.group(3))
        rows = [
            np.array([float(v) for v in line.split(",")])
            for line in f
            if line.strip()
        ]

    if len(rows) != D:
        raise DimensionError(f"{path}: header declares D={D}, found {len(rows)} functions")
    grid = Grid(resolution)
    functions = [GridFunction(grid, row) for row in rows]
    if kind == "user-supplied":
        return gram_schmidt(functions)
    return OrthonormalBasis(grid, tuple(functions), kind)
