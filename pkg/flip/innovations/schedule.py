"""
Dimension schedules n -> d_n and rate sequences n -> m_n.

Only a fixed set of expressions is accepted:

    constant    d_n = D
    floor-log   d_n = floor(log2 n) + 1
    ceil-log    d_n = ceil(log2 n) + 1
    floor-sqrt  d_n = floor(sqrt n)
    list        d_n read from explicit values

Every schedule is capped at its ambient dimension.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

from flip.errors import DimensionError

CONSTANT = "constant"
FLOOR_LOG = "floor-log"
CEIL_LOG = "ceil-log"
FLOOR_SQRT = "floor-sqrt"
LIST = "list"
SCHEDULE_KINDS = (CONSTANT, FLOOR_LOG, CEIL_LOG, FLOOR_SQRT, LIST)


def _floor_log2(n: int) -> int:
    return n.bit_length() - 1


def _ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def _ceil_sqrt(n: int) -> int:
    return math.isqrt(n - 1) + 1


_FORMULAS: Dict[str, Callable[[int], int]] = {
    FLOOR_LOG: lambda n: _floor_log2(n) + 1,
    CEIL_LOG: lambda n: _ceil_log2(n) + 1,
    FLOOR_SQRT: math.isqrt,
}

RATE_SEQUENCES: Dict[str, Callable[[int], int]] = {
    "ceil-sqrt": _ceil_sqrt,
    "ceil-log": _ceil_log2,
}


@dataclass(frozen=True)
class Schedule:
    kind: str
    ambient: int
    values: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f"Unknown schedule `{self.kind}`, expected one of {SCHEDULE_KINDS}")
        if self.ambient < 1:
            raise DimensionError(f"Ambient dimension must be positive, got {self.ambient}")
        values = tuple(int(v) for v in self.values)
        if self.kind == LIST:
            if not values:
                raise ValueError("A list schedule needs at least one value")
            if any(v < 1 for v in values):
                raise ValueError(f"Schedule values must be positive, got {values}")
            if any(b < a for a, b in zip(values, values[1:])):
                raise ValueError(f"Schedule values must be nondecreasing, got {values}")
        object.__setattr__(self, "values", values)

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"Schedules start at n=1, got {n}")
        if self.kind == CONSTANT:
            return self.ambient
        if self.kind == LIST:
            if n > len(self.values):
                raise DimensionError(
                    f"List schedule has {len(self.values)} values, d_{n} requested"
                )
            return min(self.values[n - 1], self.ambient)
        return min(max(_FORMULAS[self.kind](n), 1), self.ambient)

    def dims(self, length: int) -> Tuple[int, ...]:
        """(d_1, ..., d_length)."""
        return tuple(self(n) for n in range(1, length + 1))

    @property
    def is_constant(self) -> bool:
        return self.kind == CONSTANT


def constant_schedule(D: int) -> Schedule:
    return Schedule(CONSTANT, D)


def parse_schedule(value, ambient: int) -> Schedule:
    """
    Accepts `"constant"`, `"floor-log"`, ..., a list of integers, or a mapping
    {"kind": ..., "values": [...]}.
    """
    if isinstance(value, Schedule):
        return value
    if isinstance(value, str):
        return Schedule(value, ambient)
    if isinstance(value, (list, tuple)):
        return Schedule(LIST, ambient, tuple(value))
    if isinstance(value, dict):
        return Schedule(value.get("kind", LIST), ambient, tuple(value.get("values", ())))
    raise ValueError(f"Cannot read a schedule from {value!r}")


def rate_sequence(kind: Optional[str] = "ceil-sqrt") -> Callable[[int], int]:
    if kind not in RATE_SEQUENCES:
        raise ValueError(f"Unknown rate sequence `{kind}`, expected one of {tuple(RATE_SEQUENCES)}")
    return RATE_SEQUENCES[kind]


def validate_dims(dims: Sequence[int], ambient: int):
    if any(d < 1 or d > ambient for d in dims):
        raise DimensionError(f"Schedule values {tuple(dims)} must lie in 1..{ambient}")
    if any(b < a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"Schedule {tuple(dims)} is not nondecreasing")
