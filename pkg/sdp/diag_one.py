"""The diag-1 spectrahedron program shared by both primal relaxations.

    optimize tr(C X)  over  X ⪰ 0,  X_ii = 1

Decision variables are svec(X); the diagonal is pinned by zero-cone rows and
the PSD cone row block carries X itself, so the returned matrix comes straight
from the (already projected) slack.
"""

import logging
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
import scipy.sparse as sp

from sdp import cones
from sdp.admm import solve
from sdp.linalg import SymMatrix, smat, svec, svec_dim, svec_index
from sdp.program import ConicProgram, ConicSolver, SdpSolution, SolverSettings

logger = logging.getLogger(__name__)


class Sense(str, Enum):
    MAX = "max"
    MIN = "min"


class DiagOneResult(NamedTuple):
    value: float
    X: SymMatrix
    solution: SdpSolution


def diag_one_program(C, sense: Sense = Sense.MAX) -> ConicProgram:
    C = SymMatrix.symmetric_part(np.asarray(C, dtype=np.float64))
    order = C.order
    dim = svec_dim(order)

    diag_rows = np.arange(order)
    diag_cols = np.array([svec_index(i, i) for i in range(order)])
    pin = sp.csc_matrix((np.ones(order), (diag_rows, diag_cols)), shape=(order, dim))
    A = sp.vstack([pin, -sp.identity(dim, format="csc")], format="csc")
    b = np.concatenate([np.ones(order), np.zeros(dim)])

    sign = -1.0 if Sense(sense) is Sense.MAX else 1.0
    return ConicProgram(
        c=sign * svec(C),
        A=A,
        b=b,
        cones=(cones.zero(order), cones.psd(order)),
    )


def solve_diag_one_sdp(C, sense: Sense = Sense.MAX, settings: Optional[SolverSettings] = None,
                       solver: Optional[ConicSolver] = None) -> DiagOneResult:
    """Optimize tr(CX) over unit-diagonal PSD matrices; only the symmetric part of C matters"""
    sense = Sense(sense)
    prog = diag_one_program(C, sense)
    solution = solve(prog, settings, solver)

    order = prog.cones[0].size
    X = SymMatrix(smat(solution.s[order:], order), symmetrize=True)
    value = -solution.objective if sense is Sense.MAX else solution.objective
    logger.debug("diag-1 %s over order %d: %.9g (%s)", sense.value, order, value, solution.status.value)
    return DiagOneResult(float(value), X, solution)
