from pathlib import Path
from typing import Optional

import typer
from loguru import logger
from wasabi import msg

from flip.config import ExperimentConfig
from flip.errors import ConfigError, InvertibilityError
from flip.models import FAR1, inverse_representation, model_hash, summability
from flip.utils import exit_on_error


def validate_config(config: ExperimentConfig) -> dict:
    """Checks that go beyond parsing; returns a summary of the experiment."""
    config.ambient_basis()
    if config.algorithm.kind == "fma" and config.model.kind == FAR1:
        raise ConfigError("algorithm.kind", "fma needs a finite-order moving-average model")

    dims = config.schedule().dims(config.run.n_max + 1)
    sums = summability(config.model, config.study.truncation)
    try:
        inverse_representation(config.model, config.study.truncation)
        invertible = True
    except InvertibilityError as e:
        logger.warning(f"{e}; rate bounds will be skipped")
        invertible = False

    return {
        "model": config.model.kind,
        "D": config.model.dim,
        "model_hash": model_hash(config.model),
        "algorithm": config.algorithm.kind,
        "schedule": f"{dims[0]}..{dims[-1]}",
        "n_max": config.run.n_max,
        "psi_squared_norm_sum": sums["psi_squared_norm_sum"],
        "invertible": invertible,
    }


@exit_on_error
def validate_cli(
    config: Path = typer.Option(..., "--config", help="path to experiment config JSON"),
    seed: Optional[int] = typer.Option(None, help="override run.seed"),
):
    experiment = ExperimentConfig.from_file(config, seed=seed)
    summary = validate_config(experiment)
    msg.good(f"{config} is valid")
    msg.table(summary)
