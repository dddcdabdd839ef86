"""Forward evaluation and gradients of slope-bounded networks."""

from typing import List, Tuple

import numpy as np

from errors import DimensionMismatchError, UnsupportedActivationError
from network.models import ActivationPattern, DenseLayer, Network, ScalarNetwork
from sdp.linalg import sym_eig


def select_output(net: Network, index: int) -> ScalarNetwork:
    """Restrict the network to output coordinate `index`"""
    if not 0 <= index < net.output_dim:
        raise DimensionMismatchError(
            f"output index {index} out of range for {net.output_dim} outputs"
        )
    last = net.layers[-1]
    row = DenseLayer(last.weights[index:index + 1], last.bias[index:index + 1])
    return ScalarNetwork(net.with_layers(net.layers[:-1] + (row,)), output_index=index)


def _check_exact(net: Network):
    if net.activation == "generic":
        raise UnsupportedActivationError(
            "forward evaluation needs a piecewise-linear activation, network only carries slope bounds"
        )


def _as_batch(net: Network, x):
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    if batch.ndim != 2 or batch.shape[1] != net.input_dim:
        raise DimensionMismatchError(
            f"input has length {batch.shape[-1]}, network expects {net.input_dim}"
        )
    return batch, single


def forward_batch(net: Network, inputs):
    """Evaluate a batch of inputs; returns outputs and per-hidden-layer slope records"""
    _check_exact(net)
    batch, _ = _as_batch(net, inputs)
    a, b = net.slope_min, net.slope_max
    slopes = []
    hidden = batch
    for layer in net.layers[:-1]:
        pre = hidden @ layer.weights.T + layer.bias
        # derivative at exactly zero is taken as the lower slope
        active = np.where(pre > 0, b, a)
        slopes.append(active)
        hidden = pre * active
    last = net.layers[-1]
    return hidden @ last.weights.T + last.bias, slopes


def forward(net: Network, x) -> np.ndarray:
    """Network output at a single input"""
    batch, single = _as_batch(net, x)
    outputs, _ = forward_batch(net, batch)
    return outputs[0] if single else outputs


def gradients_for_patterns(snet: ScalarNetwork, slopes) -> np.ndarray:
    """Batched gradient: `slopes[k]` is a (batch, n_k) array for hidden layer k"""
    weights = snet.hidden_weights
    batch = slopes[0].shape[0] if slopes else 1
    rows = np.broadcast_to(snet.u, (batch, snet.u.shape[0]))
    for k in reversed(range(len(weights))):
        rows = (rows * slopes[k]) @ weights[k]
    return rows


def gradient_for_pattern(snet: ScalarNetwork, pattern: ActivationPattern) -> np.ndarray:
    """W_1^T diag(v_1) ... diag(v_{d-1}) u^T as a vector over the inputs"""
    pattern.check(snet)
    grads = gradients_for_patterns(snet, [v[None, :] for v in pattern.slopes])
    return grads[0]


def activation_pattern_at(snet: ScalarNetwork, x) -> ActivationPattern:
    """Slope of every hidden unit at input x"""
    batch, _ = _as_batch(snet.base, x)
    _, slopes = forward_batch(snet.base, batch[:1])
    return ActivationPattern(tuple(s[0] for s in slopes))


def gradient_at(snet: ScalarNetwork, x) -> np.ndarray:
    """Gradient of the scalar network at x via the recorded activation pattern"""
    return gradient_for_pattern(snet, activation_pattern_at(snet, x))


def gradients_at(snet: ScalarNetwork, inputs) -> np.ndarray:
    """Gradients at a batch of inputs"""
    _, slopes = forward_batch(snet.base, inputs)
    return gradients_for_patterns(snet, slopes)


def dual_norm(vectors, norm: str) -> np.ndarray:
    """ℓ1 norm for ℓ∞ perturbations, ℓ2 norm for ℓ2 perturbations, row-wise"""
    vectors = np.asarray(vectors, dtype=np.float64)
    order = 1 if norm == "linf" else 2
    return np.linalg.norm(vectors, ord=order, axis=-1)


def spectral_norm(W) -> float:
    """Largest singular value from the top eigenvalue of WᵀW"""
    W = np.asarray(W, dtype=np.float64)
    values, _ = sym_eig(W.T @ W)
    return float(np.sqrt(max(values[-1], 0.0)))


def induced_inf_norm(W) -> float:
    """||W||_{∞→∞}, the largest absolute row sum; equals ||Wᵀ||_{1→1}"""
    return float(np.max(np.sum(np.abs(W), axis=1)))


def layer_norms(snet: ScalarNetwork, norm: str) -> List[float]:
    """Operator norm of every hidden weight matrix, then the dual norm of u"""
    if norm == "linf":
        return [induced_inf_norm(W) for W in snet.hidden_weights] + [float(np.sum(np.abs(snet.u)))]
    return [spectral_norm(W) for W in snet.hidden_weights] + [float(np.linalg.norm(snet.u))]


def normalize_layers(snet: ScalarNetwork, norm: str) -> Tuple[ScalarNetwork, float]:
    """Divide every layer by its operator norm.

    Returns the rescaled network and the product of the norms. Both the FGL
    and the SDP bounds are positively homogeneous in each weight matrix, so
    a bound on the rescaled network times `factor` bounds the original one.
    Biases are divided by the running product, which keeps
    forward(rescaled, x) == forward(original, x) / factor. Zero layers are left as they are.
    """
    scales = [s if s > 0.0 else 1.0 for s in layer_norms(snet, norm)]
    layers, running = [], 1.0
    for layer, scale in zip(snet.base.layers, scales):
        running *= scale
        layers.append(DenseLayer(layer.weights / scale, layer.bias / running))
    return ScalarNetwork(snet.base.with_layers(layers), snet.output_index), float(np.prod(scales))
