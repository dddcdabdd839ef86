"""Random-hyperplane rounding of diag-1 solutions to feasible slope vertices.

Each round projects the Gram vectors of X onto one standard Gaussian
direction and keeps the signs. Because the lifted objectives are invariant
under a global sign flip, the rounded point is normalized so the homogenizer
is +1 before being mapped back to a slope vertex.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config import DEFAULT_ROUNDS, DEFAULT_SEED, ROUNDING_DIAG_TOL
from errors import RoundingInputError
from network.calculus import dual_norm
from network.generator import make_generator
from network.models import ActivationPattern, ScalarNetwork
from relaxations.estimate import Direction, FglEstimate, Norm, stopwatch
from relaxations.lift import CubeLift
from relaxations.primal import build_matrix_A, ngeolip
from sdp.linalg import sym_eig
from sdp.program import ConicSolver, SolverSettings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RoundingOutcome:
    value: float
    pattern: ActivationPattern
    rounds: int
    seed: int
    best_round: int = 0


def gram_factor(X) -> np.ndarray:
    """F with F Fᵀ = X (negative eigenvalues clipped); row i is the Gram vector v_i"""
    values, vectors = sym_eig(X)
    return vectors * np.sqrt(np.clip(values, 0.0, None))


def _lift_for(snet: ScalarNetwork, norm: Norm) -> CubeLift:
    A = build_matrix_A(snet)
    a, b = snet.slopes
    return CubeLift.for_linf(A, a, b) if norm is Norm.LINF else CubeLift.for_l2(A, a, b)


def round_hyperplane(X, snet: ScalarNetwork, norm, n_rounds: int = DEFAULT_ROUNDS,
                     seed: int = DEFAULT_SEED) -> RoundingOutcome:
    norm = Norm(norm)
    if n_rounds < 1:
        raise ValueError(f"n_rounds must be at least 1, got {n_rounds}")
    lift = _lift_for(snet, norm)
    X = np.asarray(X, dtype=np.float64)
    if X.shape != (lift.order, lift.order):
        raise RoundingInputError(f"X has shape {X.shape}, lifted program has order {lift.order}")
    diag_error = float(np.max(np.abs(np.diag(X) - 1.0)))
    if diag_error > ROUNDING_DIAG_TOL:
        raise RoundingInputError(f"X is not unit-diagonal (max deviation {diag_error:.3g})")

    F = gram_factor(X)
    rng = make_generator(seed)
    directions = rng.standard_normal((n_rounds, F.shape[1]))
    signs = np.where(directions @ F.T >= 0.0, 1.0, -1.0)
    vertices = lift.to_vertex(signs)

    A = build_matrix_A(snet)
    values = dual_norm(vertices @ A.T, norm)
    best = int(np.argmax(values))
    pattern = ActivationPattern((vertices[best],))
    logger.debug("rounding/%s: best %.9g at round %d of %d", norm.value, values[best], best, n_rounds)
    return RoundingOutcome(float(values[best]), pattern, n_rounds, seed, best)


def rounding_lower_bound(snet: ScalarNetwork, norm, n_rounds: int = DEFAULT_ROUNDS,
                         seed: int = DEFAULT_SEED, settings: Optional[SolverSettings] = None,
                         solver: Optional[ConicSolver] = None) -> FglEstimate:
    """Solve the matching primal relaxation, then round its solution"""
    norm = Norm(norm)
    with stopwatch() as elapsed:
        relaxed = ngeolip(snet, norm, settings, solver)
        outcome = round_hyperplane(relaxed.X, snet, norm, n_rounds, seed)

    diagnostics = dict(relaxed.diagnostics)
    diagnostics.update(rounds=outcome.rounds, best_round=outcome.best_round, relaxation_value=relaxed.value)
    return FglEstimate(
        value=outcome.value,
        direction=Direction.LOWER,
        method="round",
        norm=norm,
        diagnostics=diagnostics,
        elapsed=elapsed(),
        seed=seed,
        pattern=outcome.pattern,
    )
