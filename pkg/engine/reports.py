"""JSON report schemas shared by the CLI and the HTTP service."""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, computed_field, field_validator

from relaxations.estimate import FglEstimate


def _builtin(value):
    """numpy scalars and arrays inside diagnostics become plain Python values"""
    if isinstance(value, dict):
        return {str(k): _builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


class NetFingerprint(BaseModel):
    dims: List[int]
    sha256: str


class SolverBlock(BaseModel):
    status: str
    iterations: int
    primal_residual: float
    dual_residual: float
    gap: float
    solver: Optional[str] = None


class Report(BaseModel):
    method: str
    norm: str
    value: float
    direction: str
    elapsed_ms: float
    seed: Optional[int] = None
    solver: Optional[SolverBlock] = None
    net: Optional[NetFingerprint] = None
    pattern: Optional[List[List[float]]] = None
    diagnostics: Dict[str, Any] = {}

    @field_validator("value")
    @classmethod
    def finite_nonnegative(cls, value):
        if not np.isfinite(value) or value < 0:
            raise ValueError(f"report value must be finite and nonnegative, got {value}")
        return value

    @classmethod
    def from_estimate(cls, estimate: FglEstimate, net: Optional[dict] = None) -> "Report":
        diagnostics = _builtin(dict(estimate.diagnostics))
        solver = None
        if "status" in diagnostics:
            solver = SolverBlock(**{key: diagnostics.pop(key) for key in list(diagnostics) if key in SolverBlock.model_fields})
        return cls(
            method=estimate.method,
            norm=estimate.norm.value,
            value=estimate.value,
            direction=estimate.direction.value,
            elapsed_ms=round(estimate.elapsed * 1000.0, 3),
            seed=estimate.seed,
            solver=solver,
            net=NetFingerprint(**net) if net else None,
            pattern=estimate.pattern.to_lists() if estimate.pattern is not None else None,
            diagnostics=diagnostics,
        )

    @property
    def solver_ok(self) -> bool:
        return self.solver is None or self.solver.status == "optimal"


class CheckResult(BaseModel):
    name: str
    norm: str
    passed: bool
    lhs: float
    rhs: float
    detail: str = ""


class VerifyReport(BaseModel):
    net: NetFingerprint
    reports: List[Report]
    checks: List[CheckResult]
    skipped: Dict[str, str] = {}

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def violations(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    @computed_field
    @property
    def summary(self) -> str:
        return "PASS" if self.passed else "FAIL: " + "; ".join(
            f"[{c.norm}] {c.name} ({c.lhs:.9g} vs {c.rhs:.9g})" for c in self.violations
        )


class CutNormReport(BaseModel):
    shape: List[int]
    cut_norm: float
    cut_norm_two_sided: float
    twice_two_sided_cut_norm: float
    brute_fgl: float
    sdp_bound: float
    sdp_status: str
    identity_holds: bool
    sdp_ratio: Optional[float] = None
