"""Layerwise operator-norm product: the naive FGL upper bound."""

import numpy as np

from network.calculus import layer_norms
from network.models import ScalarNetwork
from relaxations.estimate import Direction, FglEstimate, Norm, stopwatch


def matrix_norm_product(snet: ScalarNetwork, norm) -> FglEstimate:
    norm = Norm(norm)
    with stopwatch() as elapsed:
        norms = layer_norms(snet, norm.value)
        hidden = norms[:-1]
        value = float(np.prod(norms)) * snet.base.slope_magnitude ** len(hidden)

    return FglEstimate(
        value=value,
        direction=Direction.UPPER,
        method="mp",
        norm=norm,
        diagnostics={"layer_norms": hidden},
        elapsed=elapsed(),
    )
