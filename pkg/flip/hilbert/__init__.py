from .grid import (
    DEFAULT_RESOLUTION,
    Grid,
    GridFunction,
    inner_product,
    norm,
    read_grid_functions,
    write_grid_functions,
)
from .basis import (
    BASIS_KINDS,
    CoordVector,
    OrthonormalBasis,
    fourier_basis,
    gram_schmidt,
    project,
    read_basis,
    reconstruct,
    reconstruct_rows,
    write_basis,
)
from .operators import CoordOperator, nuclear_norm, operator_norm, tensor

__all__ = [
    "DEFAULT_RESOLUTION",
    "Grid",
    "GridFunction",
    "inner_product",
    "norm",
    "read_grid_functions",
    "write_grid_functions",
    "BASIS_KINDS",
    "CoordVector",
    "OrthonormalBasis",
    "fourier_basis",
    "gram_schmidt",
    "project",
    "read_basis",
    "reconstruct",
    "reconstruct_rows",
    "write_basis",
    "CoordOperator",
    "nuclear_norm",
    "operator_norm",
    "tensor",
]
