import numpy as np
import pytest

from network.calculus import select_output
from network.generator import random_network
from network.models import DenseLayer, Network
from relaxations import dgeolip, lipsdp, ngeolip


def two_layer(W, u, bias=None):
    W = np.asarray(W, dtype=np.float64)
    hidden = DenseLayer(W, bias)
    return Network(W.shape[1], (hidden, DenseLayer([u])))


@pytest.fixture
def example_net():
    """The 2-2-1 example: W = [[1, -1], [2, 0]], u = [1, 1]"""
    return two_layer([[1.0, -1.0], [2.0, 0.0]], [1.0, 1.0])


@pytest.fixture
def example_snet(example_net):
    return select_output(example_net, 0)


@pytest.fixture
def single_neuron():
    return select_output(two_layer([[1.0]], [1.0]), 0)


@pytest.fixture
def three_layer_snet():
    return select_output(random_network([4, 3, 3, 1], seed=11), 0)


@pytest.fixture(scope="session")
def example_estimates():
    """SDP estimates on the 2-2-1 example, solved once per session"""
    snet = select_output(two_layer([[1.0, -1.0], [2.0, 0.0]], [1.0, 1.0]), 0)
    return {
        ("ngeolip", "linf"): ngeolip(snet, "linf"),
        ("ngeolip", "l2"): ngeolip(snet, "l2"),
        ("dgeolip", "linf"): dgeolip(snet),
        ("lipsdp", "l2"): lipsdp(snet),
    }
