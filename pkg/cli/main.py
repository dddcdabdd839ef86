"""Command-line surface: estimate, gen, verify, bench, cutnorm.

stdout carries exactly one JSON document per command; logs and the
human-readable tables go to stderr.
"""

import argparse
import json
import logging
import sys

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
    EXIT_CODES,
    LOG_FORMAT,
    LOG_LEVEL,
    METHODS,
    NORMS,
    SDP_METHODS,
    SOLVER_DEFAULTS,
)
from engine.runner import EstimationRunner, bench_table, checks_table, reports_table, sweep_architectures
from errors import GeolipError, InternalSolverError, MethodDepthError, NetworkFormatError
from network.generator import random_network
from network.io import fingerprint, read_network, save_network, write_network
from reductions.cutnorm import CutNormInstance
from sdp.program import SolverSettings

logger = logging.getLogger("geolip")


def parse_dims(text: str):
    try:
        dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise NetworkFormatError(f"--dims must be comma-separated integers, got {text!r}") from e
    return dims


def _settings(args) -> SolverSettings:
    return SolverSettings.with_tolerance(args.tol, max_iters=args.max_iters)


def _solver(args):
    if args.solver == "cvxpy":
        from sdp.cvxpy_backend import CvxpySolver

        return CvxpySolver()
    return None


def _runner(args) -> EstimationRunner:
    return EstimationRunner(
        settings=_settings(args),
        solver=_solver(args),
        brute_cap=args.brute_cap,
        samples=getattr(args, "samples", DEFAULT_SAMPLES),
        rounds=getattr(args, "rounds", DEFAULT_ROUNDS),
        seed=getattr(args, "seed", DEFAULT_SEED),
    )


def _emit(model) -> None:
    sys.stdout.write(model.model_dump_json(indent=2) + "\n")


def cmd_estimate(args) -> int:
    net = read_network(args.net)
    report = _runner(args).report(net, args.method, args.norm, args.output_index)
    _emit(report)
    if not report.solver_ok:
        logger.error("%s stopped with solver status %s", args.method, report.solver.status)
        return EXIT_CODES["solver"]
    return EXIT_CODES["ok"]


def cmd_gen(args) -> int:
    net = random_network(parse_dims(args.dims), seed=args.seed, scale=args.scale)
    if args.out is None:
        sys.stdout.write(save_network(net).decode("utf-8") + "\n")
        return EXIT_CODES["ok"]
    path = write_network(net, args.out)
    logger.info("wrote %s", path)
    sys.stdout.write(json.dumps({"out": str(path), **fingerprint(net)}, indent=2) + "\n")
    return EXIT_CODES["ok"]


def cmd_verify(args) -> int:
    net = read_network(args.net)
    norms = NORMS if args.norm == "both" else (args.norm,)
    result = _runner(args).verify(net, norms, args.output_index)
    _emit(result)
    sys.stderr.write(reports_table(result.reports).to_string(index=False) + "\n")
    sys.stderr.write(checks_table(result.checks).to_string(index=False) + "\n")
    sys.stderr.write(result.summary + "\n")
    return EXIT_CODES["ok"] if result.passed else EXIT_CODES["invariant"]


def cmd_bench(args) -> int:
    depths = parse_dims(args.depths)
    if any(depth < 2 for depth in depths):
        raise NetworkFormatError("--depths counts weight layers and must be at least 2")
    architectures = sweep_architectures(parse_dims(args.widths), depths, args.input_dim, args.depth_width, args.outputs)
    norms = NORMS if args.norm == "both" else (args.norm,)
    frame = _runner(args).bench(architectures, norms, args.methods, args.report_index, args.scale)
    if args.out is not None:
        frame.to_csv(args.out, index=False)
        logger.info("wrote %s", args.out)
    sys.stdout.write(frame.to_json(orient="records", indent=2) + "\n")
    for column in ("value", "seconds") if len(frame) else ():
        sys.stderr.write(f"{column}\n{bench_table(frame, column).to_string()}\n")
    unfinished = frame[frame["method"].isin(SDP_METHODS) & frame["value"].notna() & (frame["status"] != "optimal")]
    if len(unfinished):
        logger.error("solver stopped early on %s", ", ".join(unfinished["architecture"] + "/" + unfinished["method"]))
        return EXIT_CODES["solver"]
    return EXIT_CODES["ok"]


def cmd_cutnorm(args) -> int:
    instance = CutNormInstance.read(args.matrix)
    result = _runner(args).cutnorm(instance, cap=args.brute_cap)
    _emit(result)
    if not result.identity_holds:
        sys.stderr.write(
            f"FAIL: brute FGL {result.brute_fgl:.12g} != 2 * two-sided cut norm {result.twice_two_sided_cut_norm:.12g}\n"
        )
        return EXIT_CODES["invariant"]
    sys.stderr.write("PASS: brute FGL equals twice the two-sided cut norm\n")
    return EXIT_CODES["ok"]


def _add_solver_flags(parser):
    parser.add_argument("--tol", type=float, default=SOLVER_DEFAULTS["eps_abs"],
                        help="absolute and relative solver tolerance")
    parser.add_argument("--max-iters", type=int, default=SOLVER_DEFAULTS["max_iters"])
    parser.add_argument("--solver", choices=("reference", "cvxpy"), default="reference")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geolip", description="Certified bounds on the formal global Lipschitz constant of ReLU networks")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    estimate = commands.add_parser("estimate", help="bound the FGL constant with one method")
    estimate.add_argument("--net", required=True)
    estimate.add_argument("--norm", choices=NORMS, required=True)
    estimate.add_argument("--method", choices=METHODS, required=True)
    estimate.add_argument("--output-index", type=int, default=DEFAULT_OUTPUT_INDEX)
    estimate.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    estimate.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    estimate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    estimate.add_argument("--brute-cap", type=int, default=DEFAULT_BRUTE_CAP)
    _add_solver_flags(estimate)
    estimate.set_defaults(handler=cmd_estimate)

    gen = commands.add_parser("gen", help="write a seeded random network")
    gen.add_argument("--dims", required=True, help="comma-separated layer widths, input first")
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    gen.add_argument("--out", default=None, help="output file; the document goes to stdout when omitted")
    gen.set_defaults(handler=cmd_gen)

    verify = commands.add_parser("verify", help="run every applicable method and check their ordering")
    verify.add_argument("--net", required=True)
    verify.add_argument("--norm", choices=NORMS + ("both",), default="both")
    verify.add_argument("--output-index", type=int, default=DEFAULT_OUTPUT_INDEX)
    verify.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    verify.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--brute-cap", type=int, default=DEFAULT_BRUTE_CAP)
    _add_solver_flags(verify)
    verify.set_defaults(handler=cmd_verify)

    bench = commands.add_parser("bench", help="value and runtime of each method over width and depth sweeps")
    bench.add_argument("--widths", default=",".join(map(str, BENCH_WIDTHS)),
                       help="hidden widths of the two-layer sweep, comma-separated")
    bench.add_argument("--depths", default=",".join(map(str, BENCH_DEPTHS)),
                       help="weight-layer counts of the depth sweep, comma-separated")
    bench.add_argument("--depth-width", type=int, default=BENCH_DEPTH_WIDTH)
    bench.add_argument("--input-dim", type=int, default=BENCH_INPUT_DIM)
    bench.add_argument("--outputs", type=int, default=BENCH_OUTPUTS)
    bench.add_argument("--report-index", type=int, default=BENCH_REPORT_INDEX,
                       help="output whose bound fills the value column")
    bench.add_argument("--norm", choices=NORMS + ("both",), default="linf")
    bench.add_argument("--methods", nargs="+", choices=METHODS, default=list(BENCH_METHODS))
    bench.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    bench.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    bench.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    bench.add_argument("--seed", type=int, default=DEFAULT_SEED)
    bench.add_argument("--brute-cap", type=int, default=DEFAULT_BRUTE_CAP)
    bench.add_argument("--out", default=None, help="also write the table as CSV")
    _add_solver_flags(bench)
    bench.set_defaults(handler=cmd_bench)

    cutnorm = commands.add_parser("cutnorm", help="check the cut-norm reduction on a matrix")
    cutnorm.add_argument("--matrix", required=True, help="JSON file holding a 2-D array")
    cutnorm.add_argument("--brute-cap", type=int, default=DEFAULT_CUTNORM_CAP)
    _add_solver_flags(cutnorm)
    cutnorm.set_defaults(handler=cmd_cutnorm)
    return parser


def _configure_logging(verbosity: int):
    level = {0: LOG_LEVEL, 1: "INFO"}.get(verbosity, "DEBUG")
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT, force=True)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    _configure_logging(args.verbose)

    try:
        return args.handler(args)
    except MethodDepthError as e:
        logger.error("%s", e)
        return EXIT_CODES["method_depth"]
    except InternalSolverError as e:
        logger.error("%s", e)
        return EXIT_CODES["solver"]
    except (GeolipError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_CODES["bad_input"]
