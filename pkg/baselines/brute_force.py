"""Exact FGL by enumerating every vertex activation pattern.

Pattern k assigns slope b to hidden unit j when bit j of k is set and slope a
otherwise, with units numbered layer by layer. The index range is cut into
fixed chunks that joblib may evaluate in parallel; chunks are combined in
index order, so the reported argmax is the lowest maximizing index whatever
the worker count.
"""

import logging
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from config import BRUTE_CHUNK, DEFAULT_BRUTE_CAP, N_JOBS
from errors import CapExceededError
from network.calculus import dual_norm, gradients_for_patterns
from network.models import ActivationPattern, ScalarNetwork
from relaxations.estimate import Direction, FglEstimate, Norm, stopwatch

logger = logging.getLogger(__name__)


def pattern_slopes(indices, widths, slope_min: float, slope_max: float):
    """Per-layer slope arrays of shape (len(indices), width) for a batch of pattern indices"""
    indices = np.asarray(indices, dtype=np.int64)
    total = int(sum(widths))
    bits = (indices[:, None] >> np.arange(total, dtype=np.int64)) & 1
    flat = np.where(bits == 1, slope_max, slope_min)
    bounds = np.cumsum([0] + list(widths))
    return [flat[:, bounds[k]:bounds[k + 1]] for k in range(len(widths))]


def _chunk_best(snet: ScalarNetwork, start: int, stop: int, norm: str):
    a, b = snet.slopes
    slopes = pattern_slopes(np.arange(start, stop), snet.hidden_widths, a, b)
    values = dual_norm(gradients_for_patterns(snet, slopes), norm)
    k = int(np.argmax(values))
    return float(values[k]), start + k


def brute_force_fgl(snet: ScalarNetwork, norm, cap: int = DEFAULT_BRUTE_CAP,
                    n_jobs: Optional[int] = None) -> FglEstimate:
    """Maximum dual gradient norm over all 2^(hidden units) vertex patterns"""
    norm = Norm(norm)
    total = snet.base.total_hidden_units
    if total > cap:
        raise CapExceededError(f"brute force over {total} hidden units exceeds the cap of {cap}")

    count = 1 << total
    with stopwatch() as elapsed:
        bounds = [(start, min(start + BRUTE_CHUNK, count)) for start in range(0, count, BRUTE_CHUNK)]
        results = Parallel(n_jobs=n_jobs or N_JOBS)(
            delayed(_chunk_best)(snet, start, stop, norm.value) for start, stop in bounds
        )
        best_value, best_index = results[0]
        for value, index in results[1:]:
            if value > best_value:
                best_value, best_index = value, index

    a, b = snet.slopes
    flat = np.concatenate(pattern_slopes([best_index], snet.hidden_widths, a, b), axis=1)[0] if total else np.zeros(0)
    pattern = ActivationPattern.from_flat(flat, snet.hidden_widths)
    logger.info("brute/%s: %.9g over %d patterns (%.2fs)", norm.value, best_value, count, elapsed())
    return FglEstimate(
        value=best_value,
        direction=Direction.EXACT,
        method="brute",
        norm=norm,
        diagnostics={"patterns": count, "argmax_index": best_index, "chunks": len(bounds)},
        elapsed=elapsed(),
        pattern=pattern,
    )
