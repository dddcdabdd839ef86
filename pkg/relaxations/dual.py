"""Dual LMI programs: the ℓ∞ bound and LipSDP for ℓ2, in two-layer and multi-layer form.

Every hidden unit σ_i = v_i (w_i · p) with v_i in [a,b] satisfies the quadratic
constraint (σ_i - a w_i·p)(σ_i - b w_i·p) <= 0, where p is the previous layer's
vector. Each constraint gets a multiplier λ_i >= 0 whose coefficient matrix is

    -2ab w_i w_iᵀ on (p, p),   (a+b) w_i on (p, σ_i),   -2 on (σ_i, σ_i)

Summed over a layer this is the familiar [[-2ab WᵀTW, (a+b)WᵀT], [(a+b)TW, -2T]]
block. The ℓ∞ programs add a homogenizing coordinate with a box multiplier τ_j
per input; the ℓ2 programs put -ζI on the input block instead.
"""

import logging
from typing import Optional

import numpy as np

from errors import MethodDepthError
from network.calculus import normalize_layers
from network.models import ScalarNetwork
from relaxations.estimate import Direction, FglEstimate, Norm, solver_diagnostics, stopwatch
from relaxations.lmi import AffineLmi, LmiBuilder, lmi_to_conic
from sdp.admm import solve
from sdp.program import ConicSolver, SdpSolution, SolverSettings

logger = logging.getLogger(__name__)


def _require_depth(snet: ScalarNetwork, method: str, exact: Optional[int] = None):
    hidden = snet.depth - 1
    if exact is not None and snet.depth != exact:
        raise MethodDepthError(f"{method} needs exactly {exact - 1} hidden layer(s), network has {hidden}")
    if snet.depth < 2:
        raise MethodDepthError(f"{method} needs at least one hidden layer, network has none")


def _solve_lmi(build, snet: ScalarNetwork, norm: Norm, settings, solver):
    """Solve the program of the layer-normalized network; returns ζ, the rescaling factor and the LMI.

    When the solver stops short of optimality ζ is replaced by the smallest
    value that keeps the LMI feasible at the returned multipliers, so the
    bound stays a valid upper bound.
    """
    scaled, factor = normalize_layers(snet, norm.value)
    lmi = build(scaled)
    solution = solve(lmi_to_conic(lmi), settings, solver)
    zeta, repaired = float(solution.x[lmi.index("zeta")]), False
    if not solution.optimal:
        tightest = lmi.tightest(solution.x, "zeta")
        if np.isfinite(tightest):
            zeta, repaired = tightest, True
    logger.debug("%s: layer factor %.6g, zeta %.9g, repaired %s", build.__name__, factor, zeta, repaired)
    return zeta, factor, solution, lmi, repaired


def _estimate(method: str, norm: Norm, value: float, solution: SdpSolution, lmi: AffineLmi,
              elapsed: float, factor: float, repaired: bool) -> FglEstimate:
    logger.info("%s/%s: %.9g (%s, %.2fs)", method, norm.value, value, solution.status.value, elapsed)
    return FglEstimate(
        value=value,
        direction=Direction.UPPER,
        method=method,
        norm=norm,
        diagnostics=solver_diagnostics(
            solution, order=lmi.order, variables=lmi.n_vars, layer_factor=factor, repaired=repaired,
        ),
        elapsed=elapsed,
    )


def _linf_bound(method: str, build, snet: ScalarNetwork, settings, solver) -> FglEstimate:
    with stopwatch() as elapsed:
        zeta, factor, solution, lmi, repaired = _solve_lmi(build, snet, Norm.LINF, settings, solver)
    return _estimate(method, Norm.LINF, factor * max(0.5 * zeta, 0.0), solution, lmi, elapsed(), factor, repaired)


def _l2_bound(method: str, build, snet: ScalarNetwork, settings, solver) -> FglEstimate:
    with stopwatch() as elapsed:
        zeta, factor, solution, lmi, repaired = _solve_lmi(build, snet, Norm.L2, settings, solver)
    value = factor * float(np.sqrt(max(zeta, 0.0)))
    return _estimate(method, Norm.L2, value, solution, lmi, elapsed(), factor, repaired)


# Two-layer programs, blocks written out per multiplier

def _two_layer_neurons(builder: LmiBuilder, W, offset: int, a: float, b: float):
    """Multiplier λ_i for every hidden unit; inputs start at `offset`, hidden units follow them"""
    n, m = W.shape
    for i, w in enumerate(W):
        lam = builder.variable(f"lambda[{i}]", nonneg=True)
        block = np.zeros((m + n, m + n))
        block[:m, :m] = -2.0 * a * b * np.outer(w, w)
        block[:m, m + i] = (a + b) * w
        block[m + i, :m] = (a + b) * w
        block[m + i, m + i] = -2.0
        builder.add_block(lam, offset, offset, block)


def linf_lmi_2layer(snet: ScalarNetwork) -> AffineLmi:
    """Coordinates (1, x, σ); minimize ζ/2"""
    W, u = snet.hidden_weights[0], snet.u
    a, b = snet.slopes
    n, m = W.shape
    builder = LmiBuilder(1 + m + n)
    zeta = builder.variable("zeta", cost=0.5)
    builder.add(zeta, 0, 0, -1.0)
    builder.add_block(None, 0, 1 + m, u[None, :])
    for j in range(m):
        tau = builder.variable(f"tau[{j}]", nonneg=True)
        builder.add(tau, 0, 0, 1.0)
        builder.add(tau, 1 + j, 1 + j, -1.0)
    _two_layer_neurons(builder, W, 1, a, b)
    return builder.build()


def l2_lmi_2layer(snet: ScalarNetwork) -> AffineLmi:
    """Coordinates (x, σ); minimize ζ, bound √ζ"""
    W, u = snet.hidden_weights[0], snet.u
    a, b = snet.slopes
    n, m = W.shape
    builder = LmiBuilder(m + n)
    zeta = builder.variable("zeta", cost=1.0)
    builder.add_block(zeta, 0, 0, -np.eye(m))
    builder.add_block(None, m, m, np.outer(u, u))
    _two_layer_neurons(builder, W, 0, a, b)
    return builder.build()


def dgeolip_linf_2layer(snet: ScalarNetwork, settings: Optional[SolverSettings] = None,
                        solver: Optional[ConicSolver] = None) -> FglEstimate:
    _require_depth(snet, "dgeolip_linf_2layer", exact=2)
    return _linf_bound("dgeolip", linf_lmi_2layer, snet, settings, solver)


def lipsdp_l2_2layer(snet: ScalarNetwork, settings: Optional[SolverSettings] = None,
                     solver: Optional[ConicSolver] = None) -> FglEstimate:
    _require_depth(snet, "lipsdp_l2_2layer", exact=2)
    return _l2_bound("lipsdp", l2_lmi_2layer, snet, settings, solver)


# Multi-layer programs, assembled layer by layer

def _layer_offsets(snet: ScalarNetwork, start: int):
    """Offset of the input block and of every hidden block"""
    widths = [snet.input_dim] + snet.hidden_widths
    return list(start + np.concatenate([[0], np.cumsum(widths)[:-1]]).astype(int))


def _network_constraints(builder: LmiBuilder, snet: ScalarNetwork, offsets):
    a, b = snet.slopes
    for k, W in enumerate(snet.hidden_weights):
        prev, cur = offsets[k], offsets[k + 1]
        for i, w in enumerate(W):
            lam = builder.variable(f"lambda[{k}][{i}]", nonneg=True)
            if a * b != 0.0:
                builder.add_block(lam, prev, prev, -2.0 * a * b * np.outer(w, w))
            builder.add_block(lam, prev, cur + i, ((a + b) * w)[:, None])
            builder.add(lam, cur + i, cur + i, -2.0)


def linf_lmi_multilayer(snet: ScalarNetwork) -> AffineLmi:
    """Homogenizer, input block, then one block per hidden layer; order 1 + Σ n_i"""
    offsets = _layer_offsets(snet, start=1)
    order = 1 + snet.input_dim + snet.base.total_hidden_units
    builder = LmiBuilder(order)
    zeta = builder.variable("zeta", cost=0.5)
    builder.add(zeta, 0, 0, -1.0)
    builder.add_block(None, 0, offsets[-1], snet.u[None, :])
    for j in range(snet.input_dim):
        tau = builder.variable(f"tau[{j}]", nonneg=True)
        builder.add(tau, 0, 0, 1.0)
        builder.add(tau, offsets[0] + j, offsets[0] + j, -1.0)
    _network_constraints(builder, snet, offsets)
    return builder.build()


def l2_lmi_multilayer(snet: ScalarNetwork) -> AffineLmi:
    offsets = _layer_offsets(snet, start=0)
    order = snet.input_dim + snet.base.total_hidden_units
    builder = LmiBuilder(order)
    zeta = builder.variable("zeta", cost=1.0)
    builder.add_block(zeta, 0, 0, -np.eye(snet.input_dim))
    builder.add_block(None, offsets[-1], offsets[-1], np.outer(snet.u, snet.u))
    _network_constraints(builder, snet, offsets)
    return builder.build()


def dgeolip_linf_multilayer(snet: ScalarNetwork, settings: Optional[SolverSettings] = None,
                            solver: Optional[ConicSolver] = None) -> FglEstimate:
    _require_depth(snet, "dgeolip_linf_multilayer")
    return _linf_bound("dgeolip", linf_lmi_multilayer, snet, settings, solver)


def lipsdp_l2_multilayer(snet: ScalarNetwork, settings: Optional[SolverSettings] = None,
                         solver: Optional[ConicSolver] = None) -> FglEstimate:
    _require_depth(snet, "lipsdp_l2_multilayer")
    return _l2_bound("lipsdp", l2_lmi_multilayer, snet, settings, solver)


def dgeolip(snet: ScalarNetwork, settings: Optional[SolverSettings] = None,
            solver: Optional[ConicSolver] = None) -> FglEstimate:
    """ℓ∞ dual bound, two-layer program when the network has one hidden layer"""
    builder = dgeolip_linf_2layer if snet.depth == 2 else dgeolip_linf_multilayer
    return builder(snet, settings, solver)


def lipsdp(snet: ScalarNetwork, settings: Optional[SolverSettings] = None,
           solver: Optional[ConicSolver] = None) -> FglEstimate:
    builder = lipsdp_l2_2layer if snet.depth == 2 else lipsdp_l2_multilayer
    return builder(snet, settings, solver)
