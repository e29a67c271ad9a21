from .noise import NoiseSpec, simulate_noise
from .linear_process import (
    FAR1,
    FMA,
    GENERAL_MA,
    MODEL_KINDS,
    LinearProcessModel,
    ma_coefficients,
    simulate,
)
from .inverse import (
    InverseRepresentation,
    coefficient_identity_residual,
    inverse_representation,
    summability,
)
from .io import load_model, model_from_dict, model_hash, model_to_dict, save_model

__all__ = [
    "NoiseSpec",
    "simulate_noise",
    "FAR1",
    "FMA",
    "GENERAL_MA",
    "MODEL_KINDS",
    "LinearProcessModel",
    "ma_coefficients",
    "simulate",
    "InverseRepresentation",
    "coefficient_identity_residual",
    "inverse_representation",
    "summability",
    "load_model",
    "model_from_dict",
    "model_hash",
    "model_to_dict",
    "save_model",
]
