# Conic programming core
from sdp.admm import ReferenceSolver, solve
from sdp.cones import ConeBlock, ConeKind
from sdp.diag_one import DiagOneResult, Sense, solve_diag_one_sdp
from sdp.linalg import SymMatrix, project_psd, smat, svec, sym_eig
from sdp.program import ConicProgram, ConicSolver, SdpSolution, SolverSettings, SolverStatus

__all__ = [
    "ConeBlock",
    "ConeKind",
    "ConicProgram",
    "ConicSolver",
    "DiagOneResult",
    "ReferenceSolver",
    "SdpSolution",
    "Sense",
    "SolverSettings",
    "SolverStatus",
    "SymMatrix",
    "project_psd",
    "smat",
    "solve",
    "solve_diag_one_sdp",
    "svec",
    "sym_eig",
]
