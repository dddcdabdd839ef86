"""Sampling lower bound: largest gradient norm seen at random inputs."""

import logging
from typing import Optional

import numpy as np

from config import DEFAULT_SAMPLES, DEFAULT_SEED, SAMPLE_BOX, SAMPLE_CHUNK
from network.calculus import activation_pattern_at, dual_norm, gradients_at
from network.generator import make_generator
from network.models import ScalarNetwork
from relaxations.estimate import Direction, FglEstimate, Norm, stopwatch

logger = logging.getLogger(__name__)


def box_bounds(box, dim: int):
    """Lower and upper corners; `box` is a (low, high) pair of scalars or of per-coordinate sequences"""
    low, high = box
    low = np.broadcast_to(np.asarray(low, dtype=np.float64), (dim,)).copy()
    high = np.broadcast_to(np.asarray(high, dtype=np.float64), (dim,)).copy()
    if not (np.all(np.isfinite(low)) and np.all(np.isfinite(high))) or np.any(low > high):
        raise ValueError(f"invalid sampling box {box!r}")
    return low, high


def sample_lower_bound(snet: ScalarNetwork, norm, n_samples: int = DEFAULT_SAMPLES,
                       seed: int = DEFAULT_SEED, box=SAMPLE_BOX,
                       points: Optional[np.ndarray] = None) -> FglEstimate:
    """Max of ||∇f(x)||_q over uniform samples from the box, or over the given points"""
    norm = Norm(norm)
    if points is None and n_samples < 1:
        raise ValueError(f"n_samples must be at least 1, got {n_samples}")

    best_value, best_point = -np.inf, None
    with stopwatch() as elapsed:
        if points is not None:
            batches = [np.atleast_2d(np.asarray(points, dtype=np.float64))]
            n_samples = batches[0].shape[0]
        else:
            low, high = box_bounds(box, snet.input_dim)
            rng = make_generator(seed)
            batches = (
                rng.uniform(low, high, size=(min(SAMPLE_CHUNK, n_samples - start), snet.input_dim))
                for start in range(0, n_samples, SAMPLE_CHUNK)
            )
        for inputs in batches:
            values = dual_norm(gradients_at(snet, inputs), norm)
            k = int(np.argmax(values))
            if values[k] > best_value:
                best_value, best_point = float(values[k]), inputs[k].copy()

    logger.info("sample/%s: %.9g over %d points (%.2fs)", norm.value, best_value, n_samples, elapsed())
    return FglEstimate(
        value=best_value,
        direction=Direction.LOWER,
        method="sample",
        norm=norm,
        diagnostics={
            "n_samples": n_samples,
            "box": [np.asarray(bound).tolist() for bound in box] if points is None else None,
            "argmax_point": best_point.tolist(),
        },
        elapsed=elapsed(),
        seed=None if points is not None else seed,
        pattern=activation_pattern_at(snet, best_point),
    )
