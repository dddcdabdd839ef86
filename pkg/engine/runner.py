"""Method dispatch, the verification suite, benchmark sweeps and the cut-norm demo."""

import logging
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from baselines import brute_force_fgl, matrix_norm_product, rounding_lower_bound, sample_lower_bound
from config import (
    BENCH_DEPTH_WIDTH,
    BENCH_DEPTHS,
    BENCH_INPUT_DIM,
    BENCH_METHODS,
    BENCH_OUTPUTS,
    BENCH_REPORT_INDEX,
    BENCH_WIDTHS,
    DEFAULT_BRUTE_CAP,
    DEFAULT_CUTNORM_CAP,
    DEFAULT_OUTPUT_INDEX,
    DEFAULT_ROUNDS,
    DEFAULT_SAMPLES,
    DEFAULT_SCALE,
    DEFAULT_SEED,
    DUALITY_ATOL,
    DUALITY_RTOL,
    GROTHENDIECK_BOUND,
    L2_APPROX_FACTOR,
    METHODS,
    N_JOBS,
    NORMS,
    SAMPLE_BOX,
    SANDWICH_SLACK,
)
from engine.reports import CheckResult, CutNormReport, NetFingerprint, Report, VerifyReport
from errors import CapExceededError, UnsupportedMethodError
from network.calculus import select_output
from network.generator import random_network
from network.io import fingerprint
from network.models import Network, ScalarNetwork
from reductions.cutnorm import CutNormInstance
from relaxations import dgeolip, lipsdp, ngeolip
from relaxations.estimate import FglEstimate, Norm
from sdp.program import ConicSolver, SolverSettings

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ["architecture", "hidden_layers", "hidden_units", "norm", "method", "value", "seconds", "status"]


def _within(lhs: float, rhs: float, slack: float) -> bool:
    return lhs <= rhs + slack * max(1.0, abs(lhs), abs(rhs))


class EstimationRunner:
    """Runs FGL estimators by name with one shared set of knobs"""

    def __init__(self, settings: Optional[SolverSettings] = None, solver: Optional[ConicSolver] = None,
                 brute_cap: int = DEFAULT_BRUTE_CAP, samples: int = DEFAULT_SAMPLES,
                 rounds: int = DEFAULT_ROUNDS, seed: int = DEFAULT_SEED, box=SAMPLE_BOX,
                 n_jobs: int = N_JOBS):
        self.settings = settings or SolverSettings()
        self.solver = solver
        self.brute_cap = brute_cap
        self.samples = samples
        self.rounds = rounds
        self.seed = seed
        self.box = box
        self.n_jobs = n_jobs

    # Single estimates

    def estimate(self, snet: ScalarNetwork, method: str, norm) -> FglEstimate:
        norm = Norm(norm)
        if method == "ngeolip":
            return ngeolip(snet, norm, self.settings, self.solver)
        if method == "dgeolip":
            if norm is not Norm.LINF:
                raise UnsupportedMethodError("dgeolip bounds the linf FGL; use lipsdp for l2")
            return dgeolip(snet, self.settings, self.solver)
        if method == "lipsdp":
            if norm is not Norm.L2:
                raise UnsupportedMethodError("lipsdp bounds the l2 FGL; use dgeolip for linf")
            return lipsdp(snet, self.settings, self.solver)
        if method == "mp":
            return matrix_norm_product(snet, norm)
        if method == "brute":
            return brute_force_fgl(snet, norm, cap=self.brute_cap, n_jobs=self.n_jobs)
        if method == "sample":
            return sample_lower_bound(snet, norm, self.samples, self.seed, self.box)
        if method == "round":
            return rounding_lower_bound(snet, norm, self.rounds, self.seed, self.settings, self.solver)
        raise UnsupportedMethodError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")

    def report(self, net: Network, method: str, norm, output_index: int = DEFAULT_OUTPUT_INDEX) -> Report:
        snet = select_output(net, output_index)
        return Report.from_estimate(self.estimate(snet, method, norm), fingerprint(net))

    # Verification suite

    def applicable_methods(self, snet: ScalarNetwork, norm) -> Dict[str, Optional[str]]:
        """Method name -> None when it runs, or the reason it is skipped"""
        norm = Norm(norm)
        hidden_layers = snet.depth - 1
        methods = {
            "ngeolip": None if hidden_layers == 1 else "needs exactly one hidden layer",
            "dgeolip" if norm is Norm.LINF else "lipsdp": None if hidden_layers >= 1 else "needs a hidden layer",
            "mp": None,
            "brute": None if snet.base.total_hidden_units <= self.brute_cap
            else f"{snet.base.total_hidden_units} hidden units exceed cap {self.brute_cap}",
            "sample": None if snet.base.activation != "generic" else "activation has no exact forward pass",
            "round": None if hidden_layers == 1 else "needs exactly one hidden layer",
        }
        return methods

    def _run_all(self, snet: ScalarNetwork, jobs) -> List[FglEstimate]:
        return Parallel(n_jobs=self.n_jobs, prefer="threads")(
            delayed(self.estimate)(snet, method, norm) for method, norm in jobs
        )

    def checks(self, estimates: Dict[str, FglEstimate], norm: Norm, two_layer: bool) -> List[CheckResult]:
        """Sandwich ordering, duality and approximation-factor checks for one norm"""
        results = []

        def check(name, lhs, rhs, passed=None, detail=""):
            passed = _within(lhs, rhs, SANDWICH_SLACK) if passed is None else passed
            results.append(CheckResult(name=name, norm=norm.value, passed=bool(passed),
                                       lhs=float(lhs), rhs=float(rhs), detail=detail))

        value = {name: est.value for name, est in estimates.items()}
        upper = [name for name in ("ngeolip", "dgeolip", "lipsdp") if name in value]

        for name in upper:
            if not estimates[name].certified:
                check(f"{name} solver optimal", 0.0, 0.0, passed=False,
                      detail=f"status {estimates[name].solver_status}")

        if "brute" in value:
            if "sample" in value:
                check("sample <= brute", value["sample"], value["brute"])
            if "round" in value:
                check("round <= brute", value["round"], value["brute"])
            check("brute <= mp", value["brute"], value["mp"])
            for name in upper:
                check(f"brute <= {name}", value["brute"], value[name])
            if "ngeolip" in value:
                factor = GROTHENDIECK_BOUND if norm is Norm.LINF else L2_APPROX_FACTOR
                check(f"ngeolip <= {factor:.4f} * brute", value["ngeolip"], factor * value["brute"])
        elif "sample" in value:
            check("sample <= mp", value["sample"], value["mp"])
            for name in upper:
                check(f"sample <= {name}", value["sample"], value[name])

        dual = "dgeolip" if norm is Norm.LINF else "lipsdp"
        if two_layer and "ngeolip" in value and dual in value:
            primal, dual_value, rtol = value["ngeolip"], value[dual], DUALITY_RTOL
            if norm is Norm.L2:
                # compared on ζ = FGL², the objective both programs actually optimize
                primal, dual_value, rtol = primal ** 2, dual_value ** 2, 2.0 * DUALITY_RTOL
            gap = abs(primal - dual_value)
            tolerance = max(DUALITY_ATOL, rtol * max(primal, dual_value))
            check(f"ngeolip == {dual}", gap, tolerance, passed=gap <= tolerance,
                  detail=f"|primal - dual| = {gap:.3g}")
        return results

    def verify(self, net: Network, norms: Iterable = ("linf", "l2"),
               output_index: int = DEFAULT_OUTPUT_INDEX) -> VerifyReport:
        snet = select_output(net, output_index)
        norms = [Norm(norm) for norm in norms]
        jobs, skipped = [], {}
        for norm in norms:
            for method, reason in self.applicable_methods(snet, norm).items():
                if reason is None:
                    jobs.append((method, norm))
                else:
                    skipped[f"{method}/{norm.value}"] = reason

        estimates = self._run_all(snet, jobs)
        by_norm: Dict[Norm, Dict[str, FglEstimate]] = {norm: {} for norm in norms}
        for (method, norm), estimate in zip(jobs, estimates):
            by_norm[norm][method] = estimate

        checks = []
        for norm in norms:
            checks.extend(self.checks(by_norm[norm], norm, two_layer=snet.depth == 2))

        net_print = fingerprint(net)
        reports = sorted(
            (Report.from_estimate(est, net_print) for est in estimates),
            key=lambda report: (report.method, report.norm),
        )
        result = VerifyReport(net=NetFingerprint(**net_print), reports=reports, checks=checks, skipped=skipped)
        logger.info("verify %s: %s", net_print["dims"], result.summary)
        return result

    # Benchmark sweeps

    def bench(self, architectures: Iterable, norms: Iterable = NORMS, methods: Iterable = BENCH_METHODS,
              report_index: int = BENCH_REPORT_INDEX, scale: float = DEFAULT_SCALE) -> pd.DataFrame:
        """
        Every method on every output of a seeded random network per architecture.

        `value` is the bound for output `report_index` (clipped to the last
        output); `seconds` averages the wall time over all outputs. Methods
        that do not apply to an architecture get a row with no value and the
        reason in `status`.
        """
        rows = []
        for dims in architectures:
            net = random_network(dims, seed=self.seed, scale=scale)
            snets = [select_output(net, k) for k in range(net.output_dim)]
            index = min(report_index, net.output_dim - 1)
            base = {
                "architecture": "-".join(str(d) for d in net.dims),
                "hidden_layers": len(net.hidden_widths),
                "hidden_units": net.total_hidden_units,
            }
            for norm in map(Norm, norms):
                reasons = self.applicable_methods(snets[0], norm)
                for method in methods:
                    if method not in reasons:
                        continue
                    row = {**base, "norm": norm.value, "method": method}
                    if reasons[method] is not None:
                        rows.append({**row, "value": np.nan, "seconds": np.nan,
                                     "status": f"n/a: {reasons[method]}"})
                        continue
                    estimates = Parallel(n_jobs=self.n_jobs, prefer="threads")(
                        delayed(self.estimate)(snet, method, norm) for snet in snets
                    )
                    statuses = {est.solver_status for est in estimates} - {None}
                    rows.append({
                        **row,
                        "value": estimates[index].value,
                        "seconds": float(np.mean([est.elapsed for est in estimates])),
                        "status": ",".join(sorted(statuses)) or estimates[index].direction.value,
                    })
                    logger.info("bench %s %s/%s: %.6g in %.3fs per output", base["architecture"],
                                method, norm.value, rows[-1]["value"], rows[-1]["seconds"])
        return pd.DataFrame(rows, columns=BENCH_COLUMNS)

    # Cut-norm demo

    def cutnorm(self, instance: CutNormInstance, cap: int = DEFAULT_CUTNORM_CAP) -> CutNormReport:
        cut_norm = instance.cut_norm(cap)
        two_sided = instance.two_sided(cap)
        snet = instance.to_network()
        if snet.base.total_hidden_units > cap:
            raise CapExceededError(f"reduction network has {snet.base.total_hidden_units} hidden units, cap is {cap}")
        brute = brute_force_fgl(snet, Norm.LINF, cap=cap, n_jobs=self.n_jobs)
        sdp = ngeolip(snet, Norm.LINF, self.settings, self.solver)
        twice = 2.0 * two_sided
        return CutNormReport(
            shape=list(instance.shape),
            cut_norm=cut_norm,
            cut_norm_two_sided=two_sided,
            twice_two_sided_cut_norm=twice,
            brute_fgl=brute.value,
            sdp_bound=sdp.value,
            sdp_status=sdp.solver_status,
            identity_holds=bool(np.isclose(brute.value, twice, rtol=1e-12, atol=1e-12)),
            sdp_ratio=sdp.value / brute.value if brute.value > 0 else None,
        )


def reports_table(reports: List[Report]) -> pd.DataFrame:
    """One row per report, for the human-readable summary on stderr"""
    rows = [
        {
            "norm": r.norm,
            "method": r.method,
            "direction": r.direction,
            "value": r.value,
            "status": r.solver.status if r.solver else "",
            "elapsed_ms": r.elapsed_ms,
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=["norm", "method", "direction", "value", "status", "elapsed_ms"])


def checks_table(checks: List[CheckResult]) -> pd.DataFrame:
    return pd.DataFrame([c.model_dump() for c in checks], columns=list(CheckResult.model_fields))


def sweep_architectures(widths: Iterable[int] = BENCH_WIDTHS, depths: Iterable[int] = BENCH_DEPTHS,
                        input_dim: int = BENCH_INPUT_DIM, depth_width: int = BENCH_DEPTH_WIDTH,
                        outputs: int = BENCH_OUTPUTS) -> List[List[int]]:
    """Two-layer nets of each hidden width, then nets with `depth` weight layers of `depth_width` units"""
    architectures = [[input_dim, width, outputs] for width in widths]
    architectures += [[input_dim] + [depth_width] * (depth - 1) + [outputs] for depth in depths]
    return architectures


def bench_table(frame: pd.DataFrame, column: str) -> pd.DataFrame:
    """Architecture x method view of one bench column, per norm"""
    order = list(dict.fromkeys(frame["architecture"]))
    table = frame.pivot(index=["norm", "architecture"], columns="method", values=column)
    return table.reindex(sorted(table.index, key=lambda key: (key[0], order.index(key[1]))))
