"""
Immutable results of the innovations recursions.

theta[n] holds (theta_{n,1}, ..., theta_{n,k}) where k = n for the full
recursion and k = min(n, q*) for the moving-average shortcut; theta_{n,i} has
shape d_{n+1} x d_{n+1-i}. V[n] has shape d_{n+1} x d_{n+1}.
"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from flip.hilbert import CoordOperator, nuclear_norm


@dataclass(frozen=True, eq=False)
class InnovationsState:
    dims: Tuple[int, ...]
    theta: Tuple[Tuple[np.ndarray, ...], ...]
    V: Tuple[np.ndarray, ...]
    q_star: Optional[int] = None

    def __post_init__(self):
        if len(self.dims) != len(self.V):
            raise ValueError(f"{len(self.dims)} dims for {len(self.V)} V blocks")
        if len(self.theta) != len(self.V):
            raise ValueError(f"{len(self.theta)} theta rows for {len(self.V)} V blocks")
        for block in self.V:
            block.setflags(write=False)
        for row in self.theta:
            for block in row:
                block.setflags(write=False)

    @property
    def n_max(self) -> int:
        return len(self.V) - 1

    def theta_block(self, n: int, i: int) -> np.ndarray:
        """theta_{n,i}; i = 0 is the identity and untouched entries are zero."""
        if not 0 <= i <= n <= self.n_max:
            raise IndexError(f"theta_({n},{i}) outside 0 <= i <= n <= {self.n_max}")
        if i == 0:
            return np.eye(self.dims[n])
        row = self.theta[n]
        if i > len(row):
            return np.zeros((self.dims[n], self.dims[n - i]))
        return row[i - 1]

    def theta_operator(self, n: int, i: int) -> CoordOperator:
        return CoordOperator(self.theta_block(n, i))

    def V_operator(self, n: int) -> CoordOperator:
        return CoordOperator(self.V[n])

    def v_nuclear(self, n: int) -> float:
        return nuclear_norm(self.V_operator(n))

    def v_nuclear_series(self) -> np.ndarray:
        return np.array([self.v_nuclear(n) for n in range(self.n_max + 1)])


@dataclass(frozen=True, eq=False)
class InnovationsStateFixedD(InnovationsState):
    @property
    def D(self) -> int:
        return self.dims[0]


@dataclass(frozen=True, eq=False)
class InnovationsStateIncreasing(InnovationsState):
    @property
    def schedule(self) -> Tuple[int, ...]:
        return self.dims


def state_to_dict(state: InnovationsState) -> dict:
    kind = "increasing" if isinstance(state, InnovationsStateIncreasing) else "fixed"
    return {
        "kind": kind,
        "n_max": state.n_max,
        "dims": list(state.dims),
        "q_star": state.q_star,
        "V": [{"n": n, "block": block.tolist()} for n, block in enumerate(state.V)],
        "theta": [
            {"n": n, "i": i, "block": block.tolist()}
            for n, row in enumerate(state.theta)
            for i, block in enumerate(row, start=1)
        ],
    }


def dump_state(path: Union[str, Path], state: InnovationsState):
    """JSON dump; floats are written with their shortest round-trip repr."""
    with open(path, "w") as f:
        json.dump(state_to_dict(state), f, indent=1)
