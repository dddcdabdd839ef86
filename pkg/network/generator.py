import numpy as np

from errors import NetworkFormatError
from network.models import DenseLayer, Network

MAX_SEED = 2**64


def make_generator(seed: int) -> np.random.Generator:
    """PCG64 stream keyed by a u64 seed; every random draw in the project goes through here"""
    seed = int(seed)
    if not 0 <= seed < MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def random_network(dims, seed: int = 0, scale: float = 1.0) -> Network:
    """
    Seeded ReLU network with weights i.i.d. uniform on [-scale, scale].

    Stream discipline: one generator per call, layers drawn in order, each
    weight matrix filled row-major with a single `uniform` call. Biases are zero.
    """
    dims = [int(d) for d in dims]
    if len(dims) < 2:
        raise NetworkFormatError("dims needs at least an input and an output width")
    if any(d <= 0 for d in dims):
        raise NetworkFormatError(f"dims must be positive, got {dims}")
    if not scale > 0:
        raise NetworkFormatError(f"scale must be positive, got {scale}")

    rng = make_generator(seed)
    layers = []
    for n_in, n_out in zip(dims[:-1], dims[1:]):
        weights = rng.uniform(-scale, scale, size=(n_out, n_in))
        layers.append(DenseLayer(weights, np.zeros(n_out)))
    return Network(dims[0], tuple(layers), 0.0, 1.0, "relu")
