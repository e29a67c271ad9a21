"""
Seed-split Monte Carlo replication: replicate r runs with seed + r, results
come back in replicate order whatever the number of workers.
"""
import multiprocessing
from functools import partial
from typing import Tuple

import numpy as np
from loguru import logger
from tqdm import tqdm

from flip.models import LinearProcessModel, simulate
from flip.utils import worker_count


def _replicate(model: LinearProcessModel, length: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    return simulate(model, length, seed, return_noise=True)


def simulate_replicates(
    model: LinearProcessModel, length: int, runs: int, seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Trajectories and their noise, each of shape (runs, length, D)."""
    if runs < 1:
        raise ValueError(f"Monte Carlo needs at least one run, got {runs}")
    seeds = [seed + r for r in range(runs)]
    replicate = partial(_replicate, model, length)

    threads = min(worker_count(), runs)
    if threads == 1:
        results = [replicate(s) for s in tqdm(seeds, desc="Simulating", disable=runs < 500)]
    else:
        logger.info(f"Simulating {runs} replicates on {threads} processes")
        with multiprocessing.Pool(threads) as pool:
            results = pool.map(replicate, seeds)

    paths = np.stack([path for path, _ in results])
    noise = np.stack([eps for _, eps in results])
    return paths, noise


def mean_and_stderr(values: np.ndarray) -> Tuple[float, float]:
    values = np.asarray(values, dtype=float)
    mean = float(values.mean())
    if values.size < 2:
        return mean, float("nan")
    return mean, float(values.std(ddof=1) / np.sqrt(values.size))
