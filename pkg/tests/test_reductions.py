import itertools

import numpy as np
import pytest

from baselines import brute_force_fgl
from errors import CapExceededError, MatrixFormatError
from reductions import CutNormInstance, cut_norm_brute, cut_norm_two_sided, cutnorm_to_network


def test_cut_norm_examples():
    assert cut_norm_brute([[1.0, -1.0], [-1.0, 1.0]]) == 1.0
    assert cut_norm_brute([[-1.0]]) == 0.0
    assert cut_norm_brute([[1.0, 2.0], [3.0, 0.5]]) == pytest.approx(6.5)


def test_cut_norm_enumerates_the_smaller_side():
    A = np.array([[1.0, -2.0, 3.0, -1.0, 0.5]])
    assert cut_norm_brute(A) == cut_norm_brute(A.T) == pytest.approx(4.5)


def test_cut_norm_cap():
    with pytest.raises(CapExceededError):
        cut_norm_brute(np.ones((4, 4)), cap=7)


def test_two_sided_cut_norm():
    assert cut_norm_two_sided([[-1.0]]) == 1.0
    assert cut_norm_two_sided([[1.0, -1.0], [-1.0, 1.0]]) == 1.0


def test_all_negative_matrix_has_zero_one_sided_cut_norm():
    A = -np.ones((3, 3))
    assert cut_norm_brute(A) == 0.0
    assert cut_norm_two_sided(A) == 9.0
    assert brute_force_fgl(cutnorm_to_network(A), "linf").value == 18.0


def test_reduction_network_shape():
    snet = cutnorm_to_network(np.ones((3, 2)))
    assert snet.input_dim == 4
    assert snet.hidden_widths == [2]
    np.testing.assert_array_equal(snet.hidden_weights[0][:, -1], [3.0, 3.0])
    np.testing.assert_array_equal(snet.u, [1.0, 1.0])


@pytest.mark.parametrize(
    "A, fgl",
    [([[1.0, -1.0], [-1.0, 1.0]], 2.0), ([[1.0]], 2.0), ([[0.0, 0.0]], 0.0), ([[-1.0]], 2.0)],
)
def test_reduction_examples(A, fgl):
    assert brute_force_fgl(cutnorm_to_network(A), "linf").value == fgl


def test_reduction_identity_all_3x3_sign_matrices():
    """FGL_∞ of the reduction network equals 2·max(CN(A), CN(-A)) for all 512 sign patterns"""
    for signs in itertools.product((-1.0, 1.0), repeat=9):
        A = np.array(signs).reshape(3, 3)
        fgl = brute_force_fgl(cutnorm_to_network(A), "linf", n_jobs=1).value
        assert fgl == 2.0 * cut_norm_two_sided(A)


def test_instance_from_json(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("[[1, -1], [-1, 1]]")
    instance = CutNormInstance.read(path)
    assert instance.shape == (2, 2)
    assert instance.cut_norm() == 1.0


@pytest.mark.parametrize("text", ["[[1, 2], [3]]", "[1, 2]", "[[]]", '[["a"]]', "{}"])
def test_instance_rejects_malformed_json(text):
    with pytest.raises(MatrixFormatError):
        CutNormInstance.from_json(text)


def test_instance_rejects_non_finite():
    with pytest.raises(MatrixFormatError):
        CutNormInstance([[np.inf]])
