"""
Functional linear processes in basis coordinates.

Every model is written as X_n = sum_j psi_j eps_{n-j} with psi_0 = I and a
zero mean: FMA(q) has psi_j = gamma_j for j <= q, FAR(1) has psi_j = Phi^j and
GeneralMA carries a truncated psi_1..psi_J.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from flip.errors import DimensionError, StationarityError
from flip.hilbert import CoordOperator, operator_norm
from flip.models.noise import NoiseSpec, simulate_noise

FMA = "fma"
FAR1 = "far1"
GENERAL_MA = "general-ma"
MODEL_KINDS = (FMA, FAR1, GENERAL_MA)

BURN_IN_TOL = 1e-8
DECAY_TOL = 1e-8


def _as_operator(op: Union[CoordOperator, np.ndarray, Sequence]) -> CoordOperator:
    if isinstance(op, CoordOperator):
        return op
    return CoordOperator(np.atleast_2d(np.asarray(op, dtype=float)))


@dataclass(frozen=True, eq=False)
class LinearProcessModel:
    kind: str
    operators: Tuple[CoordOperator, ...]
    noise: NoiseSpec
    declared_norms: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"Unknown model kind `{self.kind}`, expected one of {MODEL_KINDS}")
        operators = tuple(_as_operator(op) for op in self.operators)
        object.__setattr__(self, "operators", operators)

        D = self.noise.dim
        for idx, op in enumerate(operators, start=1):
            if op.entries.shape != (D, D):
                raise DimensionError(
                    f"Operator {idx} has shape {op.entries.shape}, expected ({D}, {D})"
                )

        if self.kind == FAR1:
            if len(operators) != 1:
                raise ValueError(f"FAR(1) takes exactly one operator, got {len(operators)}")
            phi_norm = operator_norm(operators[0])
            if phi_norm >= 1:
                raise StationarityError(phi_norm)

        if self.declared_norms is not None:
            declared = tuple(float(v) for v in self.declared_norms)
            object.__setattr__(self, "declared_norms", declared)
            actual = [operator_norm(op) for op in operators]
            if len(declared) != len(actual) or any(
                abs(a - b) > DECAY_TOL for a, b in zip(declared, actual)
            ):
                raise ValueError(
                    f"Declared operator norms {declared} do not match actual norms {actual}"
                )

    @classmethod
    def fma(cls, gammas: Sequence, noise: NoiseSpec) -> "LinearProcessModel":
        return cls(FMA, tuple(gammas), noise)

    @classmethod
    def far1(cls, phi, noise: NoiseSpec) -> "LinearProcessModel":
        return cls(FAR1, (phi,), noise)

    @classmethod
    def general_ma(
        cls, psis: Sequence, noise: NoiseSpec, declared_norms: Optional[Sequence[float]] = None
    ) -> "LinearProcessModel":
        return cls(
            GENERAL_MA,
            tuple(psis),
            noise,
            None if declared_norms is None else tuple(declared_norms),
        )

    @property
    def dim(self) -> int:
        return self.noise.dim

    @property
    def order(self) -> int:
        """q for FMA(q), J for GeneralMA, 1 for FAR(1)."""
        return len(self.operators)

    @property
    def matrices(self) -> List[np.ndarray]:
        return [op.entries for op in self.operators]

    @property
    def is_white_noise(self) -> bool:
        return self.kind != FAR1 and all(not np.any(m) for m in self.matrices)

    def burn_in(self) -> int:
        if self.kind != FAR1:
            return 0
        phi_norm = operator_norm(self.operators[0])
        if phi_norm == 0:
            return 0
        return int(math.ceil(math.log(BURN_IN_TOL) / math.log(phi_norm)))


def ma_coefficients(model: LinearProcessModel, K: int) -> List[np.ndarray]:
    """psi_0, ..., psi_K of the MA(infinity) representation."""
    D = model.dim
    psis = [np.eye(D)]
    if model.kind == FAR1:
        phi = model.matrices[0]
        for _ in range(K):
            psis.append(phi @ psis[-1])
    else:
        mats = model.matrices
        for j in range(1, K + 1):
            psis.append(mats[j - 1] if j <= len(mats) else np.zeros((D, D)))
    return psis


def simulate(
    model: LinearProcessModel, n: int, seed: int, return_noise: bool = False
):
    """
    Length-n trajectory of coordinate vectors, shape (n, D).

    With return_noise the contemporaneous noise eps_1..eps_n is returned too.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    if model.kind == FAR1:
        burn = model.burn_in()
        eps = simulate_noise(model.noise, n + burn, seed)
        phi = model.matrices[0]
        x = np.zeros(model.dim)
        path = np.empty((n + burn, model.dim))
        for t in range(n + burn):
            x = phi @ x + eps[t]
            path[t] = x
        X, noise = path[burn:], eps[burn:]
    else:
        q = model.order
        eps = simulate_noise(model.noise, n + q, seed)
        X = eps[q:].copy()
        for j, gamma in enumerate(model.matrices, start=1):
            if np.any(gamma):
                X += eps[q - j : q - j + n] @ gamma.T
        noise = eps[q:]

    logger.debug(f"Simulated {model.kind} trajectory of length {n} (seed {seed})")
    if return_noise:
        return X, noise
    return X
