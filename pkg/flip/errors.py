"""
Exceptions raised by flip.

Validation problems subclass ValueError, numerical breakdowns subclass
ArithmeticError. The CLI relies on that split to choose its exit code.
"""
from typing import Optional, Tuple


class FlipError(Exception):
    pass


class GridMismatchError(FlipError, ValueError):
    pass


class DimensionError(FlipError, ValueError):
    pass


class StationarityError(FlipError, ValueError):
    def __init__(self, norm: float):
        self.norm = norm
        super().__init__(f"stationarity: operator norm >= 1 (got {norm:.6g})")


class InvertibilityError(FlipError, ValueError):
    pass


class ConfigError(FlipError, ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class ConvergenceError(FlipError, ArithmeticError):
    pass


class SingularCovarianceError(FlipError, ArithmeticError):
    """V block (or Gram matrix) not invertible above the pivot tolerance."""

    def __init__(self, step: Tuple[int, ...], smallest: float, message: Optional[str] = None):
        self.step = step
        self.smallest = smallest
        if message is None:
            message = (
                f"covariance block at step {step} is numerically singular "
                f"(smallest eigenvalue {smallest:.3e})"
            )
        super().__init__(message)
