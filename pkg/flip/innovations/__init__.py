from .schedule import (
    SCHEDULE_KINDS,
    Schedule,
    constant_schedule,
    parse_schedule,
    rate_sequence,
)
from .state import (
    InnovationsState,
    InnovationsStateFixedD,
    InnovationsStateIncreasing,
    dump_state,
    state_to_dict,
)
from .recursion import DEFAULT_PIVOT_TOL, run_recursion, symmetric_inverse
from .fixed import (
    Predictions,
    detect_fma_order,
    innovations_fixed,
    innovations_fma,
    one_step_predictions,
    predict_fixed,
    v_limit_gap,
)
from .increasing import innovations_increasing, predict_increasing
from .oracle import (
    beta_theta_link_check,
    oracle_best_linear_predictor,
    oracle_coefficients,
    oracle_predict,
)

__all__ = [
    "SCHEDULE_KINDS",
    "Schedule",
    "constant_schedule",
    "parse_schedule",
    "rate_sequence",
    "InnovationsState",
    "InnovationsStateFixedD",
    "InnovationsStateIncreasing",
    "dump_state",
    "state_to_dict",
    "DEFAULT_PIVOT_TOL",
    "run_recursion",
    "symmetric_inverse",
    "Predictions",
    "detect_fma_order",
    "innovations_fixed",
    "innovations_fma",
    "one_step_predictions",
    "predict_fixed",
    "v_limit_gap",
    "innovations_increasing",
    "predict_increasing",
    "beta_theta_link_check",
    "oracle_best_linear_predictor",
    "oracle_coefficients",
    "oracle_predict",
]
