"""
JSON model files.

    {
        "kind": "fma",
        "D": 2,
        "noise": {"eigenvalues": [1.0, 0.5]},
        "operators": {"gamma_1": [[0.3, 0.0], [0.1, 0.2]]},
        "truncation": 1
    }

FAR(1) uses `operators.phi`; general MA uses `operators.psi_1..psi_J` with
`truncation = J` and optional `decay` (declared operator norms).
"""
import hashlib
import json
from pathlib import Path
from typing import Union

import numpy as np

from flip.errors import ConfigError
from flip.models.linear_process import FAR1, FMA, GENERAL_MA, MODEL_KINDS, LinearProcessModel
from flip.models.noise import NoiseSpec

_OPERATOR_PREFIX = {FMA: "gamma", GENERAL_MA: "psi"}


def _matrix(value, D: int, key: str) -> np.ndarray:
    try:
        matrix = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(key, "operator must be a numeric matrix literal")
    if matrix.ndim == 1 and matrix.size == D * D:
        matrix = matrix.reshape(D, D)
    if D == 1 and matrix.ndim == 0:
        matrix = matrix.reshape(1, 1)
    if matrix.shape != (D, D):
        raise ConfigError(key, f"expected a {D}x{D} matrix, got shape {matrix.shape}")
    return matrix


def model_from_dict(data: dict, prefix: str = "model") -> LinearProcessModel:
    for key in ("kind", "D", "noise"):
        if key not in data:
            raise ConfigError(f"{prefix}.{key}", "missing")
    kind = data["kind"]
    if kind not in MODEL_KINDS:
        raise ConfigError(f"{prefix}.kind", f"unknown kind `{kind}`, expected one of {MODEL_KINDS}")
    D = data["D"]
    if not isinstance(D, int) or D < 1:
        raise ConfigError(f"{prefix}.D", "must be a positive integer")

    eigenvalues = data["noise"].get("eigenvalues") if isinstance(data["noise"], dict) else None
    if eigenvalues is None:
        raise ConfigError(f"{prefix}.noise.eigenvalues", "missing")
    if len(eigenvalues) != D:
        raise ConfigError(f"{prefix}.noise.eigenvalues", f"expected {D} values, got {len(eigenvalues)}")
    try:
        noise = NoiseSpec(np.asarray(eigenvalues, dtype=float))
    except ValueError as e:
        raise ConfigError(f"{prefix}.noise.eigenvalues", str(e))

    operators = data.get("operators", {})
    if kind == FAR1:
        if "phi" not in operators:
            raise ConfigError(f"{prefix}.operators.phi", "missing")
        phi = _matrix(operators["phi"], D, f"{prefix}.operators.phi")
        return LinearProcessModel.far1(phi, noise)

    name = _OPERATOR_PREFIX[kind]
    truncation = data.get("truncation")
    if truncation is None:
        truncation = len(operators)
    if not isinstance(truncation, int) or truncation < 0:
        raise ConfigError(f"{prefix}.truncation", "must be a nonnegative integer")
    mats = []
    for j in range(1, truncation + 1):
        key = f"{name}_{j}"
        if key not in operators:
            raise ConfigError(f"{prefix}.operators.{key}", "missing")
        mats.append(_matrix(operators[key], D, f"{prefix}.operators.{key}"))

    if kind == FMA:
        return LinearProcessModel.fma(mats, noise)
    try:
        return LinearProcessModel.general_ma(mats, noise, data.get("decay"))
    except ValueError as e:
        raise ConfigError(f"{prefix}.decay", str(e))


def model_to_dict(model: LinearProcessModel) -> dict:
    data = {
        "kind": model.kind,
        "D": model.dim,
        "noise": {"eigenvalues": model.noise.eigenvalues.tolist()},
    }
    if model.kind == FAR1:
        data["operators"] = {"phi": model.matrices[0].tolist()}
    else:
        name = _OPERATOR_PREFIX[model.kind]
        data["operators"] = {
            f"{name}_{j}": m.tolist() for j, m in enumerate(model.matrices, start=1)
        }
        data["truncation"] = model.order
        if model.declared_norms is not None:
            data["decay"] = list(model.declared_norms)
    return data


def load_model(path: Union[str, Path]) -> LinearProcessModel:
    with open(path) as f:
        return model_from_dict(json.load(f))


def save_model(path: Union[str, Path], model: LinearProcessModel):
    with open(path, "w") as f:
        f.write(json.dumps(model_to_dict(model), indent=2))


def model_hash(model: LinearProcessModel) -> str:
    canonical = json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
