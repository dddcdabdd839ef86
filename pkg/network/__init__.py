# Network model for FGL certification
from network.calculus import forward, gradient_at, gradient_for_pattern, select_output
from network.generator import random_network
from network.io import load_network, read_network, save_network, write_network
from network.models import ActivationPattern, DenseLayer, Network, ScalarNetwork

__all__ = [
    "ActivationPattern",
    "DenseLayer",
    "Network",
    "ScalarNetwork",
    "forward",
    "gradient_at",
    "gradient_for_pattern",
    "load_network",
    "random_network",
    "read_network",
    "save_network",
    "select_output",
    "write_network",
]
