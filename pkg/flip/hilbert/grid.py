"""
Grid-sampled elements of L^2([0,1]).

Functions are sampled at the left endpoints k / resolution, k = 0..resolution-1,
and integrated with the rectangle rule. The rule is a weighted dot product, so
coordinate maps built on it are exact isometries at the discrete level.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, List, Union

import numpy as np
import pandas as pd

from flip.errors import GridMismatchError

DEFAULT_RESOLUTION = 256


@dataclass(frozen=True)
class Grid:
    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 2:
            raise ValueError(f"Grid resolution must be an integer >= 2, got {self.resolution}")

    @property
    def spacing(self) -> float:
        return 1.0 / self.resolution

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.resolution) / self.resolution


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.resolution,):
            raise ValueError(
                f"Expected {self.grid.resolution} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("GridFunction values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray]):
        return cls(grid, np.broadcast_to(func(grid.points), (grid.resolution,)))

    def _check(self, other: "GridFunction"):
        if self.grid != other.grid:
            raise GridMismatchError(
                f"Grid mismatch: {self.grid.resolution} vs {other.grid.resolution}"
            )

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check(other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check(other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "GridFunction":
        return GridFunction(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return self * -1.0


def inner_product(f: GridFunction, g: GridFunction) -> float:
    f._check(g)
    return float(f.grid.spacing * np.dot(f.values, g.values))


def norm(f: GridFunction) -> float:
    return float(np.sqrt(inner_product(f, f)))


def write_grid_functions(path: Union[str, Path], functions: Iterable[GridFunction]):
    """One CSV row of `resolution` values per function."""
    rows = np.vstack([f.values for f in functions])
    pd.DataFrame(rows).to_csv(path, header=False, index=False, float_format="%.17g")


def read_grid_functions(path: Union[str, Path]) -> List[GridFunction]:
    rows = pd.read_csv(path, header=None, float_precision="round_trip").to_numpy()
    grid = Grid(rows.shape[1])
    return [GridFunction(grid, row) for row in rows]
