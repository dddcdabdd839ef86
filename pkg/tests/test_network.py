import json

import numpy as np
import pytest

from errors import DimensionMismatchError, NetworkFormatError, NonFiniteError, UnsupportedActivationError
from network.calculus import (
    dual_norm,
    forward,
    forward_batch,
    gradient_at,
    gradient_for_pattern,
    layer_norms,
    normalize_layers,
    select_output,
)
from network.generator import make_generator, random_network
from network.io import fingerprint, load_network, read_network, save_network, write_network
from network.models import ActivationPattern, DenseLayer, Network
from relaxations.primal import build_matrix_A

EXAMPLE_DOC = {
    "format": "geolip-net-v1",
    "input_dim": 2,
    "activation": {"kind": "relu", "slope_min": 0.0, "slope_max": 1.0},
    "layers": [
        {"weights": [[1.0, -1.0], [2.0, 0.0]], "bias": [0.0, 0.0]},
        {"weights": [[1.0, 1.0]], "bias": [0.0]},
    ],
}


def test_load_example_document():
    """Test the 2-2-1 document parses into a two-layer network"""
    net = load_network(json.dumps(EXAMPLE_DOC))
    assert net.input_dim == 2
    assert net.depth == 2
    assert net.dims == [2, 2, 1]
    np.testing.assert_array_equal(net.layers[0].weights, [[1.0, -1.0], [2.0, 0.0]])


def test_save_is_canonical():
    net = load_network(json.dumps(EXAMPLE_DOC))
    assert load_network(save_network(net)).dims == net.dims
    assert save_network(load_network(save_network(net))) == save_network(net)


def test_missing_bias_defaults_to_zero():
    doc = dict(EXAMPLE_DOC, layers=[{"weights": [[1.0, 2.0]]}, {"weights": [[3.0]]}])
    net = load_network(json.dumps(doc))
    np.testing.assert_array_equal(net.layers[0].bias, [0.0])


@pytest.mark.parametrize(
    "change",
    [
        {"format": "geolip-net-v2"},
        {"input_dim": 3},
        {"layers": []},
        {"layers": [{"weights": [[1.0, 2.0], [3.0]]}]},
        {"activation": {"kind": "relu", "slope_min": 0.0, "slope_max": 2.0}},
        {"activation": {"kind": "tanh"}},
    ],
)
def test_malformed_documents_are_rejected(change):
    with pytest.raises(NetworkFormatError):
        load_network(json.dumps(dict(EXAMPLE_DOC, **change)))


def test_non_finite_weights_are_rejected():
    with pytest.raises(NonFiniteError):
        DenseLayer([[np.nan, 1.0]])
    with pytest.raises(NonFiniteError):
        save_network(Network(1, (DenseLayer([[1.0]]),), -np.inf, 1.0, "generic"))


def test_layer_chaining_is_checked():
    with pytest.raises(DimensionMismatchError):
        Network(3, (DenseLayer([[1.0, 2.0]]),))


def test_forward_example(example_net):
    """x = (1, 0): pre-activations (1, 2), output 3"""
    outputs, slopes = forward_batch(example_net, [[1.0, 0.0]])
    assert outputs[0, 0] == pytest.approx(3.0)
    np.testing.assert_array_equal(slopes[0], [[1.0, 1.0]])
    assert forward(example_net, [1.0, 0.0])[0] == pytest.approx(3.0)


def test_forward_rejects_wrong_input_length(example_net):
    with pytest.raises(DimensionMismatchError):
        forward(example_net, [1.0, 0.0, 0.0])


def test_generic_activation_has_no_forward_pass():
    net = Network(1, (DenseLayer([[1.0]]), DenseLayer([[1.0]])), -0.5, 1.0, "generic")
    with pytest.raises(UnsupportedActivationError):
        forward(net, [1.0])


def test_gradient_for_pattern(example_snet):
    """Pattern (1, 1) gives A (1, 1) = (3, -1)"""
    grad = gradient_for_pattern(example_snet, ActivationPattern(([1.0, 1.0],)))
    np.testing.assert_allclose(grad, [3.0, -1.0])
    np.testing.assert_allclose(grad, build_matrix_A(example_snet) @ [1.0, 1.0])


def test_pattern_shape_is_checked(example_snet):
    with pytest.raises(DimensionMismatchError):
        gradient_for_pattern(example_snet, ActivationPattern(([1.0, 1.0, 0.0],)))


def test_gradient_matches_finite_differences():
    """Central differences with h = 1e-5 at generic points"""
    snet = select_output(random_network([5, 6, 4, 1], seed=3), 0)
    rng = make_generator(9)
    h = 1e-5
    for x in rng.uniform(-1.0, 1.0, size=(5, 5)):
        numeric = np.array([
            (forward(snet.base, x + h * e)[0] - forward(snet.base, x - h * e)[0]) / (2 * h)
            for e in np.eye(5)
        ])
        np.testing.assert_allclose(gradient_at(snet, x), numeric, atol=1e-4)


def test_gradient_at_example_point(example_snet):
    """At (1, 1) the first unit sits exactly at zero and takes the lower slope"""
    np.testing.assert_allclose(gradient_at(example_snet, [1.0, 1.0]), [2.0, 0.0])


def test_gradient_for_pattern_ignores_bias(example_net):
    shifted = example_net.with_layers(
        (DenseLayer(example_net.layers[0].weights, [3.0, -1.0]), DenseLayer(example_net.layers[1].weights, [2.0]))
    )
    pattern = ActivationPattern(([0.0, 1.0],))
    np.testing.assert_array_equal(
        gradient_for_pattern(select_output(shifted, 0), pattern),
        gradient_for_pattern(select_output(example_net, 0), pattern),
    )


@pytest.mark.parametrize("c", [1e-3, 0.5, 40.0])
def test_gradient_for_pattern_scales_with_each_layer(c):
    net = random_network([4, 3, 3, 1], seed=2)
    pattern = ActivationPattern(([1.0, 0.0, 1.0], [1.0, 1.0, 0.0]))
    base = gradient_for_pattern(select_output(net, 0), pattern)
    for index in range(net.depth):
        layers = list(net.layers)
        layers[index] = DenseLayer(c * layers[index].weights, layers[index].bias)
        scaled = gradient_for_pattern(select_output(net.with_layers(layers), 0), pattern)
        np.testing.assert_allclose(scaled, c * base, rtol=1e-12, atol=1e-15)


def test_gradient_at_is_a_vertex_gradient():
    snet = select_output(random_network([3, 4, 1], seed=6), 0)
    codes = np.arange(2 ** 4)[:, None] >> np.arange(4) & 1
    vertex_grads = [gradient_for_pattern(snet, ActivationPattern((code.astype(float),))) for code in codes]
    for x in make_generator(2).uniform(-2.0, 2.0, size=(50, 3)):
        grad = gradient_at(snet, x)
        assert any(np.array_equal(grad, v) for v in vertex_grads)


@pytest.mark.parametrize("norm", ["linf", "l2"])
def test_normalize_layers(norm):
    net = random_network([5, 4, 3, 1], seed=4)
    net = net.with_layers([DenseLayer(layer.weights, layer.bias + 0.3) for layer in net.layers])
    snet = select_output(net, 0)
    scaled, factor = normalize_layers(snet, norm)
    np.testing.assert_allclose(layer_norms(scaled, norm), 1.0)
    assert factor == pytest.approx(np.prod(layer_norms(snet, norm)))
    x = make_generator(1).uniform(-1.0, 1.0, size=(8, 5))
    np.testing.assert_allclose(factor * forward(scaled.base, x), forward(net, x), rtol=1e-12, atol=1e-12)


def test_normalize_layers_leaves_zero_layers():
    snet = select_output(Network(2, (DenseLayer(np.zeros((3, 2))), DenseLayer([[1.0, 2.0, 2.0]]))), 0)
    scaled, factor = normalize_layers(snet, "l2")
    assert factor == pytest.approx(3.0)
    np.testing.assert_array_equal(scaled.hidden_weights[0], np.zeros((3, 2)))


def test_dual_norm_orders():
    np.testing.assert_allclose(dual_norm([[3.0, -1.0]], "linf"), [4.0])
    np.testing.assert_allclose(dual_norm([[3.0, -4.0]], "l2"), [5.0])


def test_select_output_range():
    net = random_network([3, 4, 2], seed=1)
    assert select_output(net, 1).u.shape == (4,)
    with pytest.raises(DimensionMismatchError):
        select_output(net, 2)


def test_random_network_is_deterministic(tmp_path):
    first = write_network(random_network([2, 2, 1], seed=7), tmp_path / "a.json")
    second = write_network(random_network([2, 2, 1], seed=7), tmp_path / "b.json")
    assert first.read_bytes() == second.read_bytes()
    assert random_network([2, 2, 1], seed=8).layers[0].weights.tolist() != read_network(first).layers[0].weights.tolist()


def test_random_network_weight_range():
    net = random_network([6, 5, 1], seed=2, scale=0.5)
    assert np.all(np.abs(net.layers[0].weights) <= 0.5)
    np.testing.assert_array_equal(net.layers[0].bias, np.zeros(5))


@pytest.mark.parametrize("dims", [[5], [3, 0, 1], []])
def test_random_network_rejects_bad_dims(dims):
    with pytest.raises(NetworkFormatError):
        random_network(dims)


def test_fingerprint_tracks_content():
    net = random_network([2, 3, 1], seed=0)
    assert fingerprint(net) == fingerprint(random_network([2, 3, 1], seed=0))
    assert fingerprint(net)["sha256"] != fingerprint(random_network([2, 3, 1], seed=1))["sha256"]
    assert fingerprint(net)["dims"] == [2, 3, 1]


def test_read_missing_file(tmp_path):
    with pytest.raises(NetworkFormatError):
        read_network(tmp_path / "missing.json")
