"""Result type shared by every estimator."""

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from network.models import ActivationPattern
from sdp.linalg import SymMatrix
from sdp.program import SdpSolution


class Norm(str, Enum):
    LINF = "linf"
    L2 = "l2"

    @property
    def dual_order(self) -> int:
        """Order of the gradient norm matching this input perturbation"""
        return 1 if self is Norm.LINF else 2


class Direction(str, Enum):
    UPPER = "upper"
    LOWER = "lower"
    EXACT = "exact"


@dataclass(frozen=True, eq=False)
class FglEstimate:
    value: float
    direction: Direction
    method: str
    norm: Norm
    diagnostics: dict = field(default_factory=dict)
    elapsed: float = 0.0
    seed: Optional[int] = None
    pattern: Optional[ActivationPattern] = None
    X: Optional[SymMatrix] = None

    def __post_init__(self):
        value = float(self.value)
        if not np.isfinite(value) or value < 0:
            raise ValueError(f"{self.method} produced an invalid bound {value}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "norm", Norm(self.norm))

    @property
    def solver_status(self) -> Optional[str]:
        return self.diagnostics.get("status")

    @property
    def certified(self) -> bool:
        """False only for solver-backed estimates that stopped short of optimality"""
        status = self.solver_status
        return status is None or status == "optimal"


def solver_diagnostics(solution: SdpSolution, **extra) -> dict:
    diagnostics = solution.summary()
    diagnostics["solver"] = solution.solver
    diagnostics["objective"] = solution.objective
    diagnostics.update(extra)
    return diagnostics


@contextmanager
def stopwatch():
    """Yields a callable returning seconds elapsed since entry"""
    started = time.perf_counter()
    yield lambda: time.perf_counter() - started
