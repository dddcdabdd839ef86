"""Standard-form conic programs, solver settings and solutions.

    minimize    c^T x
    subject to  b - A x in K,   K = product of zero, nonneg and psd blocks

with dual  maximize -b^T y  subject to  A^T y + c = 0,  y in K*.
PSD blocks are stored with the svec convention of `sdp.linalg`.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol, Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field

from config import SOLVER_DEFAULTS
from sdp.cones import ConeBlock, total_dim


class SolverSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps_abs: float = Field(default=SOLVER_DEFAULTS["eps_abs"], gt=0)
    eps_rel: float = Field(default=SOLVER_DEFAULTS["eps_rel"], gt=0)
    eps_infeasible: float = Field(default=SOLVER_DEFAULTS["eps_infeasible"], gt=0)
    max_iters: int = Field(default=SOLVER_DEFAULTS["max_iters"], gt=0)
    scale: bool = SOLVER_DEFAULTS["scale"]
    rho: float = Field(default=SOLVER_DEFAULTS["rho"], gt=0)
    sigma: float = Field(default=SOLVER_DEFAULTS["sigma"], gt=0)
    alpha: float = Field(default=SOLVER_DEFAULTS["alpha"], gt=0, lt=2)
    adaptive_rho_interval: int = Field(default=SOLVER_DEFAULTS["adaptive_rho_interval"], ge=0)
    check_interval: int = Field(default=SOLVER_DEFAULTS["check_interval"], gt=0)
    log_interval: int = Field(default=SOLVER_DEFAULTS["log_interval"], gt=0)
    equilibration_passes: int = Field(default=SOLVER_DEFAULTS["equilibration_passes"], ge=0)

    @classmethod
    def with_tolerance(cls, tol: float, **overrides) -> "SolverSettings":
        return cls(eps_abs=tol, eps_rel=tol, **overrides)


class SolverStatus(str, Enum):
    OPTIMAL = "optimal"
    MAX_ITERS = "max_iters"
    INFEASIBLE = "infeasible_detected"
    UNBOUNDED = "unbounded_detected"


@dataclass(frozen=True, eq=False)
class ConicProgram:
    c: np.ndarray
    A: sp.csc_matrix
    b: np.ndarray
    cones: Tuple[ConeBlock, ...]

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64).ravel()
        b = np.asarray(self.b, dtype=np.float64).ravel()
        A = sp.csc_matrix(self.A, dtype=np.float64)
        cones = tuple(self.cones)
        if A.shape != (b.shape[0], c.shape[0]):
            raise ValueError(f"A has shape {A.shape}, expected {(b.shape[0], c.shape[0])}")
        if total_dim(cones) != b.shape[0]:
            raise ValueError(f"cones cover {total_dim(cones)} rows, program has {b.shape[0]}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(b)) and np.all(np.isfinite(A.data))):
            raise ValueError("conic program data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "cones", cones)

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_rows(self) -> int:
        return self.b.shape[0]


@dataclass(frozen=True, eq=False)
class SdpSolution:
    x: np.ndarray
    s: np.ndarray
    y: np.ndarray
    objective: float
    status: SolverStatus
    primal_residual: float
    dual_residual: float
    gap: float
    iterations: int
    solver: str = "reference"
    diagnostics: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status is SolverStatus.OPTIMAL

    def summary(self) -> dict:
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "gap": self.gap,
        }


def _inf_norm(v) -> float:
    return float(np.max(np.abs(v))) if np.size(v) else 0.0


def residuals(prog: ConicProgram, x, s, y):
    """Unscaled residuals and the tolerances they are compared against"""
    Ax = prog.A @ x
    ATy = prog.A.T @ y
    cx = float(prog.c @ x)
    by = float(prog.b @ y)
    return {
        "primal": _inf_norm(Ax + s - prog.b),
        "dual": _inf_norm(ATy + prog.c),
        "gap": abs(cx + by),
        "primal_scale": max(_inf_norm(Ax), _inf_norm(s), _inf_norm(prog.b)),
        "dual_scale": max(_inf_norm(ATy), _inf_norm(prog.c)),
        "objective": cx,
    }


def converged(res: dict, settings: SolverSettings) -> bool:
    return (
        res["primal"] <= settings.eps_abs + settings.eps_rel * res["primal_scale"]
        and res["dual"] <= settings.eps_abs + settings.eps_rel * res["dual_scale"]
        and res["gap"] <= settings.eps_abs + settings.eps_rel * abs(res["objective"])
    )


class ConicSolver(Protocol):
    name: str

    def solve(self, prog: ConicProgram, settings: SolverSettings) -> SdpSolution:
        ...
