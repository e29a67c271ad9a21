from .coordinates import EigenCoordinates, eigen_coordinates
from .montecarlo import mean_and_stderr, simulate_replicates
from .decomposition import (
    ErrorReport,
    error_decomposition,
    is_monotone_in_dimension,
    monotone_in_dimension,
    noise_floor_convergence,
    squared_prediction_errors,
)
from .rates import (
    RateBound,
    calibrate_rate_constant,
    excess_error_mc,
    excess_error_series,
    model_rate_bounds,
    rate_bound,
)
from .theta import theta_convergence
from .lemmas import LemmaReport, lemma_checks
from .study import run_study, study_cli

__all__ = [
    "EigenCoordinates",
    "eigen_coordinates",
    "mean_and_stderr",
    "simulate_replicates",
    "ErrorReport",
    "error_decomposition",
    "is_monotone_in_dimension",
    "monotone_in_dimension",
    "noise_floor_convergence",
    "squared_prediction_errors",
    "RateBound",
    "calibrate_rate_constant",
    "excess_error_mc",
    "excess_error_series",
    "model_rate_bounds",
    "rate_bound",
    "theta_convergence",
    "LemmaReport",
    "lemma_checks",
    "run_study",
    "study_cli",
]
