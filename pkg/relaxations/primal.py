"""Primal diag-1 relaxations of the two-layer FGL problem."""

import logging
from typing import Optional

import numpy as np

from errors import InternalSolverError, MethodDepthError
from network.models import ScalarNetwork
from relaxations.estimate import Direction, FglEstimate, Norm, solver_diagnostics, stopwatch
from relaxations.lift import CubeLift
from sdp.diag_one import Sense, solve_diag_one_sdp
from sdp.program import ConicSolver, SolverSettings

logger = logging.getLogger(__name__)


def _require_two_layer(snet: ScalarNetwork, method: str):
    if snet.depth != 2:
        raise MethodDepthError(f"{method} needs exactly one hidden layer, network has {snet.depth - 1}")


def build_matrix_A(snet: ScalarNetwork) -> np.ndarray:
    """A = W^T diag(u), inputs by hidden units"""
    _require_two_layer(snet, "build_matrix_A")
    W = snet.hidden_weights[0]
    return W.T * snet.u[None, :]


def ngeolip_linf(snet: ScalarNetwork, settings: Optional[SolverSettings] = None,
                 solver: Optional[ConicSolver] = None) -> FglEstimate:
    """Upper bound on FGL_∞: half the diag-1 optimum of the lifted bilinear form"""
    _require_two_layer(snet, "ngeolip")
    with stopwatch() as elapsed:
        lift = CubeLift.for_linf(build_matrix_A(snet), *snet.slopes)
        result = solve_diag_one_sdp(lift.matrix, Sense.MAX, settings, solver)
        value = max(0.5 * result.value, 0.0)

    logger.info("ngeolip/linf: %.9g (%s, %.2fs)", value, result.solution.status.value, elapsed())
    return FglEstimate(
        value=value,
        direction=Direction.UPPER,
        method="ngeolip",
        norm=Norm.LINF,
        diagnostics=solver_diagnostics(result.solution, order=lift.order),
        elapsed=elapsed(),
        X=result.X,
    )


def ngeolip_l2(snet: ScalarNetwork, settings: Optional[SolverSettings] = None,
               solver: Optional[ConicSolver] = None) -> FglEstimate:
    """Upper bound on FGL_2: half the square root of the diag-1 optimum of M̂ = GᵀG"""
    _require_two_layer(snet, "ngeolip")
    with stopwatch() as elapsed:
        lift = CubeLift.for_l2(build_matrix_A(snet), *snet.slopes)
        result = solve_diag_one_sdp(lift.matrix, Sense.MAX, settings, solver)
        trace = result.value
        if trace < 0:
            # X = I is feasible, so the optimum is at least tr(M̂) >= 0
            limit = 1e-6 * max(1.0, float(np.trace(lift.matrix)))
            if result.solution.optimal and trace < -limit:
                raise InternalSolverError(f"diag-1 optimum of a PSD form is negative: {trace}")
            trace = 0.0
        value = 0.5 * float(np.sqrt(trace))

    logger.info("ngeolip/l2: %.9g (%s, %.2fs)", value, result.solution.status.value, elapsed())
    return FglEstimate(
        value=value,
        direction=Direction.UPPER,
        method="ngeolip",
        norm=Norm.L2,
        diagnostics=solver_diagnostics(result.solution, order=lift.order, trace=result.value),
        elapsed=elapsed(),
        X=result.X,
    )


def ngeolip(snet: ScalarNetwork, norm, settings: Optional[SolverSettings] = None,
            solver: Optional[ConicSolver] = None) -> FglEstimate:
    builder = ngeolip_linf if Norm(norm) is Norm.LINF else ngeolip_l2
    return builder(snet, settings, solver)
