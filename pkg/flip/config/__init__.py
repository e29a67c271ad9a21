from .experiment import (
    ALGORITHM_KINDS,
    OUTPUT_FORMATS,
    AlgorithmArguments,
    BasisArguments,
    ExperimentConfig,
    RunArguments,
    StudyArguments,
)

__all__ = [
    "ALGORITHM_KINDS",
    "OUTPUT_FORMATS",
    "AlgorithmArguments",
    "BasisArguments",
    "ExperimentConfig",
    "RunArguments",
    "StudyArguments",
]
