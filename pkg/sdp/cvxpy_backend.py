"""Optional external backend: hands a ConicProgram to cvxpy (SCS by default)."""

import logging
import time
from typing import Optional

import numpy as np
import scipy.sparse as sp

from sdp.cones import ConeKind, block_slices
from sdp.linalg import _tril, svec_dim
from sdp.program import ConicProgram, SdpSolution, SolverSettings, SolverStatus, residuals

logger = logging.getLogger(__name__)

_STATUS = {
    "optimal": SolverStatus.OPTIMAL,
    "infeasible": SolverStatus.INFEASIBLE,
    "infeasible_inaccurate": SolverStatus.INFEASIBLE,
    "unbounded": SolverStatus.UNBOUNDED,
    "unbounded_inaccurate": SolverStatus.UNBOUNDED,
}


def _svec_selector(order: int) -> sp.csr_matrix:
    """Sparse map vec(S) -> svec(S) for symmetric S; cvxpy vectorizes in Fortran order"""
    rows, cols, scale = _tril(order)
    positions = cols * order + rows
    return sp.csr_matrix((scale, (np.arange(rows.size), positions)), shape=(svec_dim(order), order * order))


def _value(item, dim: int) -> np.ndarray:
    if item is not None and hasattr(item, "value"):
        item = item.value
    if item is None:
        return np.zeros(dim)
    return np.asarray(item, dtype=np.float64).ravel()


class CvxpySolver:
    name = "cvxpy"

    def __init__(self, solver: str = "SCS", **solver_options):
        self.solver = solver
        self.solver_options = solver_options

    def _options(self, settings: SolverSettings) -> dict:
        options = dict(self.solver_options)
        if self.solver == "SCS":
            options.setdefault("eps_abs", settings.eps_abs)
            options.setdefault("eps_rel", settings.eps_rel)
            options.setdefault("max_iters", settings.max_iters)
        return options

    def solve(self, prog: ConicProgram, settings: Optional[SolverSettings] = None) -> SdpSolution:
        import cvxpy as cp

        settings = settings or SolverSettings()
        started = time.perf_counter()
        x = cp.Variable(prog.n_vars)
        constraints, slacks = [], []
        for cone, part in zip(prog.cones, block_slices(prog.cones)):
            A_part, b_part = prog.A[part], prog.b[part]
            if cone.kind is ConeKind.ZERO:
                slack = np.zeros(cone.dim)
                constraints.append(A_part @ x == b_part)
            elif cone.kind is ConeKind.NONNEG:
                slack = cp.Variable(cone.dim, nonneg=True)
                constraints.append(A_part @ x + slack == b_part)
            else:
                S = cp.Variable((cone.size, cone.size), PSD=True)
                slack = _svec_selector(cone.size) @ cp.vec(S, order="F")
                constraints.append(A_part @ x + slack == b_part)
            slacks.append(slack)

        problem = cp.Problem(cp.Minimize(prog.c @ x), constraints)
        try:
            problem.solve(solver=self.solver, **self._options(settings))
        except cp.SolverError as exc:
            logger.warning("cvxpy backend failed: %s", exc)

        status = _STATUS.get(problem.status, SolverStatus.MAX_ITERS)
        xv = np.zeros(prog.n_vars) if x.value is None else np.asarray(x.value, dtype=np.float64)
        sv = np.concatenate([_value(slack, cone.dim) for slack, cone in zip(slacks, prog.cones)])
        yv = np.concatenate([_value(c.dual_value, cone.dim) for c, cone in zip(constraints, prog.cones)])

        # the equality multiplier's sign depends on how cvxpy canonicalized the row; keep the one satisfying A^T y + c = 0
        if np.linalg.norm(prog.A.T @ (-yv) + prog.c) < np.linalg.norm(prog.A.T @ yv + prog.c):
            yv = -yv

        res = residuals(prog, xv, sv, yv)
        logger.info("cvxpy/%s: %s, objective %.9g", self.solver, problem.status, res["objective"])
        return SdpSolution(
            x=xv,
            s=sv,
            y=yv,
            objective=res["objective"],
            status=status,
            primal_residual=res["primal"],
            dual_residual=res["dual"],
            gap=res["gap"],
            iterations=int(getattr(problem.solver_stats, "num_iters", None) or 0),
            solver=f"{self.name}/{self.solver}",
            diagnostics={"seconds": time.perf_counter() - started, "cvxpy_status": problem.status},
        )
