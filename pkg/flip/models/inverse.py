"""
Inverse (AR(infinity)) representation X_n = eps_n + sum_j pi_j X_{n-j}.

Only cases with a closed form are certified: FMA(1) with ||gamma_1|| < 1 and
FAR(1). Anything else is refused instead of guessed.
"""
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from flip.errors import InvertibilityError
from flip.hilbert import CoordOperator, operator_norm
from flip.models.linear_process import FAR1, FMA, LinearProcessModel, ma_coefficients


@dataclass(frozen=True)
class InverseRepresentation:
    pi: Tuple[CoordOperator, ...]
    truncation: int
    tail_bound: float

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")
        if len(self.pi) != self.truncation:
            raise ValueError(f"Expected {self.truncation} coefficients, got {len(self.pi)}")

    @property
    def norms(self) -> np.ndarray:
        return np.array([operator_norm(p) for p in self.pi])

    def tail(self, m: int) -> float:
        """Upper bound on sum_{j>m} ||pi_j||_L."""
        if m >= self.truncation:
            return self.tail_bound
        return float(self.norms[m:].sum()) + self.tail_bound


def inverse_representation(model: LinearProcessModel, M: int) -> InverseRepresentation:
    if M < 1:
        raise ValueError(f"Truncation M must be >= 1, got {M}")
    D = model.dim

    if model.kind == FAR1:
        phi = model.operators[0]
        pi = (phi,) + tuple(CoordOperator.zeros(D, D) for _ in range(M - 1))
        return InverseRepresentation(pi, M, 0.0)

    if model.kind == FMA and model.order == 1:
        gamma = model.matrices[0]
        gamma_norm = operator_norm(model.operators[0])
        if gamma_norm >= 1:
            raise InvertibilityError(
                f"invertibility not certified: ||gamma_1|| = {gamma_norm:.6g} >= 1"
            )
        pi = []
        power = np.eye(D)
        for j in range(1, M + 1):
            power = power @ gamma
            pi.append(CoordOperator((-1.0) ** (j + 1) * power))
        tail_bound = gamma_norm ** (M + 1) / (1.0 - gamma_norm)
        return InverseRepresentation(tuple(pi), M, tail_bound)

    raise InvertibilityError(
        f"invertibility not certified for {model.kind} of order {model.order}"
    )


def coefficient_identity_residual(model: LinearProcessModel, inverse: InverseRepresentation) -> float:
    """max_k max |sum_{j=1}^k pi_j psi_{k-j} - psi_k| over k = 1..M."""
    psis = ma_coefficients(model, inverse.truncation)
    pis = [p.entries for p in inverse.pi]
    worst = 0.0
    for k in range(1, inverse.truncation + 1):
        total = sum(pis[j - 1] @ psis[k - j] for j in range(1, k + 1))
        worst = max(worst, float(np.abs(total - psis[k]).max()))
    return worst


def summability(model: LinearProcessModel, M: int) -> Dict[str, float]:
    """
    sum_j ||psi_j||_L^2 (stationarity) and sum_j ||pi_j||_L (invertibility).

    The second sum is NaN when no inverse representation is certified.
    """
    psi_sq = float(sum(np.linalg.norm(p, 2) ** 2 for p in ma_coefficients(model, M)[1:]))
    try:
        inverse = inverse_representation(model, M)
        pi_sum = float(inverse.norms.sum() + inverse.tail_bound)
    except InvertibilityError:
        pi_sum = float("nan")
    return {"psi_squared_norm_sum": psi_sq, "pi_norm_sum": pi_sum}
