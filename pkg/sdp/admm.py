"""Reference conic solver: operator splitting on the primal-dual pair.

Each iteration solves one quasi-definite linear system (factored once per
penalty value), relaxes the result, projects onto the cone product and takes a
dual step. Moreau's decomposition keeps y in K* and s in K at every iterate,
so only the affine residuals and the gap have to be driven to zero.
"""

import logging
import time
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from config import RHO_BOUNDS, RHO_UPDATE_RATIO
from sdp.cones import ConeKind, block_slices, distance, project
from sdp.program import (
    ConicProgram,
    ConicSolver,
    SdpSolution,
    SolverSettings,
    SolverStatus,
    converged,
    residuals,
)

logger = logging.getLogger(__name__)

_TINY = 1e-30
_SCALE_CLIP = (1e-4, 1e4)
_MIN_ITERS_FOR_INFEASIBILITY = 100


def equilibrate(A: sp.csc_matrix, cones, passes: int):
    """Ruiz equilibration; rows of one PSD block share a single factor so the cone is preserved"""
    m, n = A.shape
    D, E = np.ones(m), np.ones(n)
    scaled = sp.csr_matrix(A, copy=True)
    slices = block_slices(cones)
    for _ in range(passes):
        row = spla.norm(scaled, np.inf, axis=1)
        for cone, part in zip(cones, slices):
            if cone.kind is ConeKind.PSD:
                row[part] = np.max(row[part])
        col = spla.norm(scaled, np.inf, axis=0)
        d = np.clip(1.0 / np.sqrt(np.where(row > 1e-8, row, 1.0)), *_SCALE_CLIP)
        e = np.clip(1.0 / np.sqrt(np.where(col > 1e-8, col, 1.0)), *_SCALE_CLIP)
        scaled = sp.diags(d) @ scaled @ sp.diags(e)
        D *= d
        E *= e
    return sp.csc_matrix(scaled), D, E


class _ScaledProblem:
    """Ruiz-equilibrated data with scalar cost and right-hand-side factors.

        minimize  (γ E c)ᵀ x̂  subject to  D A E x̂ + ŝ = β D b

    maps back through x = E x̂ / β, s = ŝ / (β D), y = D ŷ / γ.
    """

    def __init__(self, prog: ConicProgram, settings: SolverSettings):
        if settings.scale and settings.equilibration_passes > 0:
            self.A, self.D, self.E = equilibrate(prog.A, prog.cones, settings.equilibration_passes)
        else:
            self.A, self.D, self.E = prog.A.copy(), np.ones(prog.n_rows), np.ones(prog.n_vars)
        self.AT = sp.csr_matrix(self.A.T)
        b, c = self.D * prog.b, self.E * prog.c
        self.beta = _unit_factor(b) if settings.scale else 1.0
        self.gamma = _unit_factor(c) if settings.scale else 1.0
        self.b = self.beta * b
        self.c = self.gamma * c
        self.cones = prog.cones

    def unscale(self, x, s, y):
        return self.E * x / self.beta, s / (self.beta * self.D), self.D * y / self.gamma

    def factor(self, rho: float, sigma: float):
        n = self.A.shape[1]
        kkt = sigma * sp.identity(n, format="csc") + rho * sp.csc_matrix(self.AT @ self.A)
        return spla.factorized(sp.csc_matrix(kkt))


def _unit_factor(v) -> float:
    size = _inf(v)
    return float(np.clip(1.0 / size, *_SCALE_CLIP)) if size > _TINY else 1.0


def _inf(v) -> float:
    return float(np.max(np.abs(v))) if np.size(v) else 0.0


class ReferenceSolver:
    """Self-contained solver for programs over zero, nonneg and psd cones"""

    name = "reference"

    def solve(self, prog: ConicProgram, settings: Optional[SolverSettings] = None) -> SdpSolution:
        settings = settings or SolverSettings()
        started = time.perf_counter()
        work = _ScaledProblem(prog, settings)
        n, m = prog.n_vars, prog.n_rows

        x, s, y = np.zeros(n), np.zeros(m), np.zeros(m)
        rho, sigma, alpha = settings.rho, settings.sigma, settings.alpha
        solve_kkt = work.factor(rho, sigma)

        status = SolverStatus.MAX_ITERS
        best, best_score = None, np.inf
        pinf_hits = dinf_hits = 0
        iteration = 0
        res = None

        for iteration in range(1, settings.max_iters + 1):
            rhs = sigma * x - work.c - work.AT @ y + rho * (work.AT @ (work.b - s))
            x_tilde = solve_kkt(rhs)
            Ax = work.A @ x_tilde
            x_next = alpha * x_tilde + (1.0 - alpha) * x
            Ax_relaxed = alpha * Ax + (1.0 - alpha) * (work.b - s)
            s_next = project(work.cones, work.b - Ax_relaxed - y / rho)
            y_next = y + rho * (Ax_relaxed + s_next - work.b)
            dx, dy = x_next - x, y_next - y
            x, s, y = x_next, s_next, y_next

            if iteration % settings.check_interval and iteration != settings.max_iters:
                continue

            xu, su, yu = work.unscale(x, s, y)
            res = residuals(prog, xu, su, yu)
            if converged(res, settings):
                status = SolverStatus.OPTIMAL
                best = (xu, su, yu, res)
                break

            score = max(
                res["primal"] / (settings.eps_abs + settings.eps_rel * res["primal_scale"]),
                res["dual"] / (settings.eps_abs + settings.eps_rel * res["dual_scale"]),
                res["gap"] / (settings.eps_abs + settings.eps_rel * abs(res["objective"])),
            )
            if score < best_score:
                best, best_score = (xu, su, yu, res), score

            if iteration >= _MIN_ITERS_FOR_INFEASIBILITY:
                pinf_hits = pinf_hits + 1 if self._primal_infeasible(work, dy, settings) else 0
                dinf_hits = dinf_hits + 1 if self._dual_infeasible(work, dx, settings) else 0
                if pinf_hits >= 2:
                    status = SolverStatus.INFEASIBLE
                    best = (xu, su, yu, res)
                    break
                if dinf_hits >= 2:
                    status = SolverStatus.UNBOUNDED
                    best = (xu, su, yu, res)
                    break

            if iteration % settings.log_interval < settings.check_interval:
                logger.debug(
                    "iter %d: primal %.3e dual %.3e gap %.3e rho %.2e",
                    iteration, res["primal"], res["dual"], res["gap"], rho,
                )

            if settings.adaptive_rho_interval and iteration % settings.adaptive_rho_interval == 0:
                new_rho = self._balanced_rho(work, x, s, y, rho)
                if new_rho > RHO_UPDATE_RATIO * rho or new_rho < rho / RHO_UPDATE_RATIO:
                    rho = new_rho
                    solve_kkt = work.factor(rho, sigma)

        xu, su, yu, res = best
        solution = SdpSolution(
            x=xu,
            s=su,
            y=yu,
            objective=res["objective"],
            status=status,
            primal_residual=res["primal"],
            dual_residual=res["dual"],
            gap=res["gap"],
            iterations=iteration,
            solver=self.name,
            diagnostics={"rho": rho, "seconds": time.perf_counter() - started},
        )
        logger.info(
            "reference solver: %s after %d iterations, objective %.9g",
            status.value, iteration, solution.objective,
        )
        return solution

    @staticmethod
    def _balanced_rho(work: _ScaledProblem, x, s, y, rho: float) -> float:
        Ax = work.A @ x
        ATy = work.AT @ y
        primal = _inf(Ax + s - work.b) / (max(_inf(Ax), _inf(s), _inf(work.b)) + _TINY)
        dual = _inf(ATy + work.c) / (max(_inf(ATy), _inf(work.c)) + _TINY)
        if primal < _TINY or dual < _TINY:
            return rho
        return float(np.clip(rho * np.sqrt(primal / dual), *RHO_BOUNDS))

    @staticmethod
    def _primal_infeasible(work: _ScaledProblem, dy, settings: SolverSettings) -> bool:
        size = _inf(dy)
        if size < _TINY:
            return False
        eps = settings.eps_infeasible
        return (
            _inf(work.AT @ dy) <= eps * size
            and float(work.b @ dy) < -eps * size
            and distance(work.cones, dy, dual=True) <= eps * size
        )

    @staticmethod
    def _dual_infeasible(work: _ScaledProblem, dx, settings: SolverSettings) -> bool:
        size = _inf(dx)
        if size < _TINY:
            return False
        eps = settings.eps_infeasible
        return (
            float(work.c @ dx) < -eps * size
            and distance(work.cones, -(work.A @ dx), dual=False) <= eps * size
        )


def solve(prog: ConicProgram, settings: Optional[SolverSettings] = None,
          solver: Optional[ConicSolver] = None) -> SdpSolution:
    """Solve with the given backend, the reference solver by default"""
    return (solver or ReferenceSolver()).solve(prog, settings or SolverSettings())
