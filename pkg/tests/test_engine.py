import json

import numpy as np
import pytest

from engine import EstimationRunner, Report, bench_table, checks_table, reports_table, sweep_architectures
from errors import MethodDepthError, UnsupportedMethodError
from network.calculus import select_output
from network.generator import random_network
from reductions import CutNormInstance
from relaxations.estimate import FglEstimate, Norm
from tests.conftest import two_layer


@pytest.fixture
def runner():
    return EstimationRunner(samples=2000, rounds=200)


def test_report_from_estimate(runner, example_net):
    report = runner.report(example_net, "ngeolip", "linf")
    assert report.method == "ngeolip"
    assert report.direction == "upper"
    assert report.solver.status == "optimal"
    assert report.net.dims == [2, 2, 1]
    assert "status" not in report.diagnostics
    assert json.loads(report.model_dump_json())["solver"]["iterations"] > 0


def test_report_for_stochastic_method_carries_seed(runner, example_net):
    report = runner.report(example_net, "sample", "linf")
    assert report.seed == 0
    assert report.solver is None
    assert report.solver_ok


def test_report_rejects_negative_values():
    with pytest.raises(ValueError):
        Report(method="mp", norm="linf", value=-1.0, direction="upper", elapsed_ms=0.0)


@pytest.mark.parametrize("method, norm", [("dgeolip", "l2"), ("lipsdp", "linf"), ("nope", "linf")])
def test_unsupported_routes(runner, example_snet, method, norm):
    with pytest.raises(UnsupportedMethodError):
        runner.estimate(example_snet, method, norm)


def test_depth_mismatch(runner, three_layer_snet):
    with pytest.raises(MethodDepthError):
        runner.estimate(three_layer_snet, "ngeolip", "l2")
    with pytest.raises(MethodDepthError):
        runner.estimate(three_layer_snet, "round", "linf")


def test_applicable_methods(runner, example_snet, three_layer_snet):
    assert all(reason is None for reason in runner.applicable_methods(example_snet, "linf").values())
    deep = runner.applicable_methods(three_layer_snet, "l2")
    assert deep["ngeolip"] is not None and deep["round"] is not None
    assert deep["lipsdp"] is None and "dgeolip" not in deep


def test_verify_example_passes(runner, example_net):
    result = runner.verify(example_net)
    assert result.passed, result.summary
    assert result.summary == "PASS"
    values = {(r.method, r.norm): r.value for r in result.reports}
    assert values[("brute", "linf")] == 4.0
    assert abs(values[("ngeolip", "linf")] - values[("dgeolip", "linf")]) <= 1e-3 * 4.0
    keys = [(r.method, r.norm) for r in result.reports]
    assert keys == sorted(keys)


def test_verify_zero_network_passes(runner):
    net = two_layer(np.zeros((3, 2)), np.zeros(3))
    result = runner.verify(net)
    assert result.passed, result.summary
    assert all(r.value <= 1e-3 for r in result.reports)


def test_verify_three_layer_skips_two_layer_methods(runner, three_layer_snet):
    result = runner.verify(three_layer_snet.base, norms=["linf"])
    assert result.passed, result.summary
    assert "ngeolip/linf" in result.skipped and "round/linf" in result.skipped
    assert {r.method for r in result.reports} == {"dgeolip", "mp", "brute", "sample"}


def test_checks_flag_violations():
    runner = EstimationRunner()
    estimates = {
        "mp": FglEstimate(3.0, "upper", "mp", "linf"),
        "brute": FglEstimate(4.0, "exact", "brute", "linf"),
        "sample": FglEstimate(4.5, "lower", "sample", "linf"),
    }
    failed = [c.name for c in runner.checks(estimates, Norm.LINF, two_layer=False) if not c.passed]
    assert failed == ["sample <= brute", "brute <= mp"]


def test_checks_fall_back_to_sample_without_brute_force():
    runner = EstimationRunner()
    estimates = {
        "mp": FglEstimate(10.0, "upper", "mp", "l2"),
        "lipsdp": FglEstimate(5.0, "upper", "lipsdp", "l2", diagnostics={"status": "optimal"}),
        "sample": FglEstimate(4.0, "lower", "sample", "l2"),
    }
    checks = runner.checks(estimates, Norm.L2, two_layer=False)
    assert [c.name for c in checks] == ["sample <= mp", "sample <= lipsdp"]
    assert all(c.passed for c in checks)


def test_unfinished_solver_fails_verification():
    runner = EstimationRunner()
    estimates = {
        "mp": FglEstimate(10.0, "upper", "mp", "linf"),
        "dgeolip": FglEstimate(5.0, "upper", "dgeolip", "linf", diagnostics={"status": "max_iters"}),
    }
    checks = runner.checks(estimates, Norm.LINF, two_layer=False)
    assert [c.name for c in checks if not c.passed] == ["dgeolip solver optimal"]


def test_tables(runner, example_net):
    result = runner.verify(example_net, norms=["l2"])
    table = reports_table(result.reports)
    assert list(table.columns) == ["norm", "method", "direction", "value", "status", "elapsed_ms"]
    assert len(table) == len(result.reports)
    assert len(checks_table(result.checks)) == len(result.checks)


def test_sweep_architectures():
    assert sweep_architectures(widths=[2, 3], depths=[3], input_dim=4, depth_width=5, outputs=2) == [
        [4, 2, 2], [4, 3, 2], [4, 5, 5, 2],
    ]
    default = sweep_architectures()
    assert [dims[1] for dims in default[:5]] == [8, 16, 64, 128, 256]
    assert [len(dims) - 1 for dims in default[5:]] == [3, 7, 8]


def test_bench(runner):
    architectures = sweep_architectures(widths=[2, 3], depths=[3], input_dim=3, depth_width=3, outputs=2)
    frame = runner.bench(architectures, norms=["linf"], methods=["ngeolip", "dgeolip", "mp", "brute"])
    assert list(frame.columns) == ["architecture", "hidden_layers", "hidden_units", "norm", "method",
                                   "value", "seconds", "status"]
    assert list(dict.fromkeys(frame["architecture"])) == ["3-2-2", "3-3-2", "3-3-3-2"]

    deep = frame[frame["architecture"] == "3-3-3-2"].set_index("method")
    assert np.isnan(deep.loc["ngeolip", "value"])
    assert deep.loc["ngeolip", "status"].startswith("n/a")

    for _, rows in frame[frame["value"].notna()].groupby("architecture"):
        value = rows.set_index("method")["value"]
        assert value["brute"] <= value["dgeolip"] + 1e-6 <= value["mp"] + 2e-6
        assert (rows.set_index("method").loc[["dgeolip"], "status"] == "optimal").all()
    assert (frame["seconds"].dropna() >= 0.0).all()

    # the value column reports the last output when the network has fewer than nine
    net = random_network([3, 2, 2], seed=runner.seed)
    expected = runner.estimate(select_output(net, 1), "mp", "linf").value
    assert frame.set_index(["architecture", "method"]).loc[("3-2-2", "mp"), "value"] == pytest.approx(expected)

    table = bench_table(frame, "value")
    assert list(table.index) == [("linf", "3-2-2"), ("linf", "3-3-2"), ("linf", "3-3-3-2")]
    assert sorted(table.columns) == ["brute", "dgeolip", "mp", "ngeolip"]


def test_cutnorm_report(runner):
    result = runner.cutnorm(CutNormInstance([[1.0, -1.0], [-1.0, 1.0]]))
    assert result.cut_norm == 1.0
    assert result.twice_two_sided_cut_norm == 2.0
    assert result.brute_fgl == 2.0
    assert result.identity_holds
    assert 1.0 - 1e-5 <= result.sdp_ratio <= 1.783


def test_cutnorm_report_separates_one_and_two_sided(runner):
    result = runner.cutnorm(CutNormInstance([[-1.0]]))
    assert result.cut_norm == 0.0
    assert result.cut_norm_two_sided == 1.0
    assert result.twice_two_sided_cut_norm == 2.0
    assert result.brute_fgl == 2.0
    assert result.identity_holds


def test_cutnorm_report_zero_matrix(runner):
    result = runner.cutnorm(CutNormInstance([[0.0]]))
    assert result.identity_holds
    assert result.brute_fgl == 0.0
    assert result.sdp_ratio is None


def test_multi_output_network_selects_row(runner):
    net = random_network([3, 4, 2], seed=6)
    first = runner.report(net, "brute", "linf", output_index=0)
    second = runner.report(net, "brute", "linf", output_index=1)
    assert first.value == runner.estimate(select_output(net, 0), "brute", "linf").value
    assert first.value != second.value
