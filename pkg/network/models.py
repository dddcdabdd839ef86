from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from config import ACTIVATION_KINDS
from errors import DimensionMismatchError, NetworkFormatError, NonFiniteError


def _frozen_array(values, ndim, what):
    array = np.array(values, dtype=np.float64)
    if array.ndim != ndim:
        raise DimensionMismatchError(f"{what} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise NonFiniteError(f"{what} contains a non-finite entry")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DenseLayer:
    """Affine layer: rows are outputs, columns are inputs"""

    weights: np.ndarray
    bias: np.ndarray = None

    def __post_init__(self):
        weights = _frozen_array(self.weights, 2, "weights")
        if weights.shape[0] == 0 or weights.shape[1] == 0:
            raise DimensionMismatchError(f"weights must be non-empty, got shape {weights.shape}")
        bias = np.zeros(weights.shape[0]) if self.bias is None else self.bias
        bias = _frozen_array(bias, 1, "bias")
        if bias.shape[0] != weights.shape[0]:
            raise DimensionMismatchError(
                f"bias length {bias.shape[0]} does not match {weights.shape[0]} weight rows"
            )
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", bias)

    @property
    def n_out(self) -> int:
        return self.weights.shape[0]

    @property
    def n_in(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True, eq=False)
class Network:
    """Feed-forward network with slope-bounded activations on every hidden layer"""

    input_dim: int
    layers: Tuple[DenseLayer, ...]
    slope_min: float = 0.0
    slope_max: float = 1.0
    activation: str = "relu"

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise NetworkFormatError("network must have at least one layer")
        if int(self.input_dim) <= 0:
            raise DimensionMismatchError("input_dim must be a positive integer")
        expected = int(self.input_dim)
        for index, layer in enumerate(layers):
            if not isinstance(layer, DenseLayer):
                raise NetworkFormatError(f"layer {index} is not a DenseLayer")
            if layer.n_in != expected:
                raise DimensionMismatchError(
                    f"layer {index} has {layer.n_in} columns but receives {expected} values"
                )
            expected = layer.n_out
        a, b = float(self.slope_min), float(self.slope_max)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise NonFiniteError("slope bounds must be finite")
        if a > b:
            raise NetworkFormatError(f"slope_min {a} exceeds slope_max {b}")
        if self.activation not in ACTIVATION_KINDS:
            raise NetworkFormatError(f"unknown activation kind {self.activation!r}")
        if self.activation == "relu" and (a, b) != (0.0, 1.0):
            raise NetworkFormatError("relu activation requires slope bounds (0, 1)")
        object.__setattr__(self, "input_dim", int(self.input_dim))
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "slope_min", a)
        object.__setattr__(self, "slope_max", b)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def dims(self) -> list:
        return [self.input_dim] + [layer.n_out for layer in self.layers]

    @property
    def hidden_widths(self) -> list:
        return [layer.n_out for layer in self.layers[:-1]]

    @property
    def total_hidden_units(self) -> int:
        return sum(self.hidden_widths)

    @property
    def output_dim(self) -> int:
        return self.layers[-1].n_out

    @property
    def slope_magnitude(self) -> float:
        return max(abs(self.slope_min), abs(self.slope_max))

    def with_layers(self, layers: Sequence[DenseLayer]) -> "Network":
        return Network(self.input_dim, tuple(layers), self.slope_min, self.slope_max, self.activation)


@dataclass(frozen=True, eq=False)
class ScalarNetwork:
    """Network restricted to a single output coordinate; `u` is the final weight row"""

    base: Network
    output_index: int = 0

    def __post_init__(self):
        if self.base.output_dim != 1:
            raise DimensionMismatchError(
                f"scalar network needs exactly one output row, got {self.base.output_dim}"
            )

    @property
    def u(self) -> np.ndarray:
        return self.base.layers[-1].weights[0]

    @property
    def hidden_weights(self) -> list:
        return [layer.weights for layer in self.base.layers[:-1]]

    @property
    def depth(self) -> int:
        return self.base.depth

    @property
    def input_dim(self) -> int:
        return self.base.input_dim

    @property
    def hidden_widths(self) -> list:
        return self.base.hidden_widths

    @property
    def slopes(self) -> Tuple[float, float]:
        return self.base.slope_min, self.base.slope_max


@dataclass(frozen=True, eq=False)
class ActivationPattern:
    """One slope vector per hidden layer"""

    slopes: Tuple[np.ndarray, ...] = field(default_factory=tuple)

    def __post_init__(self):
        vectors = tuple(_frozen_array(v, 1, "pattern vector") for v in self.slopes)
        object.__setattr__(self, "slopes", vectors)

    def check(self, snet: ScalarNetwork) -> None:
        widths = snet.hidden_widths
        if len(self.slopes) != len(widths):
            raise DimensionMismatchError(
                f"pattern has {len(self.slopes)} vectors for {len(widths)} hidden layers"
            )
        for index, (vector, width) in enumerate(zip(self.slopes, widths)):
            if vector.shape[0] != width:
                raise DimensionMismatchError(
                    f"pattern vector {index} has length {vector.shape[0]}, layer width is {width}"
                )

    def is_vertex(self, slope_min: float, slope_max: float) -> bool:
        return all(np.all((v == slope_min) | (v == slope_max)) for v in self.slopes)

    def flat(self) -> np.ndarray:
        if not self.slopes:
            return np.zeros(0)
        return np.concatenate(self.slopes)

    @classmethod
    def from_flat(cls, values, widths) -> "ActivationPattern":
        values = np.asarray(values, dtype=np.float64)
        if values.shape[0] != sum(widths):
            raise DimensionMismatchError(
                f"flat pattern has {values.shape[0]} entries for {sum(widths)} hidden units"
            )
        bounds = np.cumsum([0] + list(widths))
        return cls(tuple(values[bounds[i]:bounds[i + 1]] for i in range(len(widths))))

    def to_lists(self) -> list:
        return [v.tolist() for v in self.slopes]
