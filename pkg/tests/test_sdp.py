import numpy as np
import pytest
import scipy.sparse as sp

from network.generator import make_generator
from sdp import cones
from sdp.admm import ReferenceSolver, equilibrate, solve
from sdp.diag_one import Sense, diag_one_program, solve_diag_one_sdp
from sdp.linalg import SymMatrix, project_psd, smat, svec, svec_index, sym_eig
from sdp.program import ConicProgram, SolverSettings, SolverStatus


def random_symmetric(order, seed):
    M = make_generator(seed).standard_normal((order, order))
    return 0.5 * (M + M.T)


def test_sym_eig_diagonal():
    values, vectors = sym_eig(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(values, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(np.abs(vectors.T @ vectors), np.eye(3), atol=1e-12)


def test_sym_eig_swap_matrix():
    values, vectors = sym_eig([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(values, [-1.0, 1.0])
    np.testing.assert_allclose(np.abs(vectors), np.full((2, 2), 1 / np.sqrt(2)))


@pytest.mark.parametrize("order", [20, 50])
def test_sym_eig_reconstruction(order):
    M = random_symmetric(order, seed=order)
    values, vectors = sym_eig(M)
    np.testing.assert_allclose((vectors * values) @ vectors.T, M, atol=1e-9 * order * np.max(np.abs(M)))
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(order), atol=1e-9)


def test_sym_eig_rejects_non_finite():
    with pytest.raises(ValueError):
        sym_eig([[np.inf, 0.0], [0.0, 1.0]])


def test_project_psd_examples():
    np.testing.assert_allclose(project_psd([[0.0, 1.0], [1.0, 0.0]]).data, [[0.5, 0.5], [0.5, 0.5]])
    np.testing.assert_allclose(project_psd(-np.eye(3)).data, np.zeros((3, 3)))
    P = np.array([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(project_psd(P).data, P, atol=1e-9)


def test_project_psd_idempotent():
    once = project_psd(random_symmetric(12, seed=4))
    np.testing.assert_allclose(project_psd(once).data, once.data, atol=1e-9)
    assert sym_eig(once)[0][0] >= -1e-12


def test_sym_matrix_requires_symmetry():
    with pytest.raises(ValueError):
        SymMatrix([[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_allclose(SymMatrix.symmetric_part([[0.0, 1.0], [0.0, 0.0]]).data, [[0.0, 0.5], [0.5, 0.0]])


def test_svec_inner_product_is_trace():
    A, B = random_symmetric(5, seed=1), random_symmetric(5, seed=2)
    assert svec(A) @ svec(B) == pytest.approx(np.trace(A @ B))
    np.testing.assert_allclose(smat(svec(A)), A)


def test_svec_index_layout():
    """Lower triangle stored row by row"""
    assert [svec_index(r, c) for r in range(3) for c in range(r + 1)] == list(range(6))
    assert svec_index(0, 2) == svec_index(2, 0)


def test_cone_projection_by_kind():
    blocks = (cones.zero(1), cones.nonneg(2), cones.psd(2))
    v = np.concatenate([[5.0], [-1.0, 2.0], svec(np.array([[0.0, 1.0], [1.0, 0.0]]))])
    projected = cones.project(blocks, v)
    np.testing.assert_allclose(projected[:3], [0.0, 0.0, 2.0])
    np.testing.assert_allclose(smat(projected[3:]), [[0.5, 0.5], [0.5, 0.5]])
    assert cones.project(blocks, v, dual=True)[0] == 5.0


def test_equilibration_keeps_psd_rows_uniform():
    A = sp.csc_matrix(np.array([[1.0, 0.0], [0.0, 100.0], [3.0, 0.0], [0.0, 0.5]]))
    blocks = (cones.nonneg(1), cones.psd(2))
    _, D, _ = equilibrate(A, blocks, passes=5)
    assert D[1] == D[2] == D[3]


def test_diag_one_swap_matrix():
    result = solve_diag_one_sdp([[0.0, 1.0], [1.0, 0.0]])
    assert result.solution.status is SolverStatus.OPTIMAL
    assert result.value == pytest.approx(2.0, abs=1e-5)
    np.testing.assert_allclose(np.diag(result.X.data), np.ones(2), atol=1e-5)


@pytest.mark.parametrize("k", [1, 3, 5])
def test_diag_one_identity(k):
    assert solve_diag_one_sdp(np.eye(k)).value == pytest.approx(k, abs=1e-5)


def test_diag_one_minimize_all_ones():
    """Three unit vectors at 120 degrees"""
    C = np.ones((3, 3)) - np.eye(3)
    result = solve_diag_one_sdp(C, Sense.MIN)
    assert result.value == pytest.approx(-3.0, abs=1e-5)


def test_diag_one_uses_symmetric_part():
    """Single-neuron ℓ∞ lift, passed unsymmetrized"""
    C = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    assert solve_diag_one_sdp(C).value == pytest.approx(2.0, abs=1e-5)
    assert solve_diag_one_sdp(0.5 * (C + C.T)).value == pytest.approx(2.0, abs=1e-5)


@pytest.mark.parametrize("c", [1e-3, 3.0, 1e3])
def test_diag_one_scales_linearly(c):
    C = random_symmetric(4, seed=6)
    base = solve_diag_one_sdp(C).value
    assert solve_diag_one_sdp(c * C).value == pytest.approx(c * base, rel=1e-5, abs=1e-6)


@pytest.mark.parametrize("k", [1e-5, 1.0, 1e5])
def test_scalar_bound_at_any_magnitude(k):
    """minimize 2x subject to x >= k"""
    prog = ConicProgram(c=np.array([2.0]), A=sp.csc_matrix([[-1.0]]), b=np.array([-k]), cones=(cones.nonneg(1),))
    solution = solve(prog, SolverSettings.with_tolerance(1e-10))
    assert solution.optimal
    assert solution.x[0] == pytest.approx(k, rel=1e-4)
    assert solution.y[0] == pytest.approx(2.0, rel=1e-4)


def test_diag_one_program_shape():
    prog = diag_one_program(np.eye(3))
    assert prog.n_vars == 6
    assert [block.kind for block in prog.cones] == [cones.ConeKind.ZERO, cones.ConeKind.PSD]


def test_optimal_solution_meets_tolerances():
    settings = SolverSettings()
    solution = solve(diag_one_program(random_symmetric(5, seed=8)), settings)
    assert solution.optimal
    assert solution.gap <= settings.eps_abs + settings.eps_rel * abs(solution.objective)


def test_solve_is_deterministic():
    prog = diag_one_program(random_symmetric(4, seed=5))
    first, second = solve(prog), solve(prog)
    assert first.objective == second.objective
    assert first.iterations == second.iterations


def test_infeasible_program_is_detected():
    """x >= 1 and x <= 0 written as nonneg rows"""
    prog = ConicProgram(
        c=np.zeros(1),
        A=sp.csc_matrix(np.array([[-1.0], [1.0]])),
        b=np.array([-1.0, 0.0]),
        cones=(cones.nonneg(2),),
    )
    assert ReferenceSolver().solve(prog).status is SolverStatus.INFEASIBLE


def test_max_iters_returns_best_iterate():
    settings = SolverSettings(max_iters=10)
    solution = solve(diag_one_program(random_symmetric(6, seed=2)), settings)
    assert solution.status is SolverStatus.MAX_ITERS
    assert solution.iterations == 10
    assert np.isfinite(solution.objective)


def test_conic_program_validates_shapes():
    with pytest.raises(ValueError):
        ConicProgram(c=np.zeros(2), A=sp.csc_matrix((3, 2)), b=np.zeros(2), cones=(cones.nonneg(2),))
    with pytest.raises(ValueError):
        ConicProgram(c=np.zeros(1), A=sp.csc_matrix((2, 1)), b=np.zeros(2), cones=(cones.nonneg(3),))


def test_settings_validate_tolerance():
    with pytest.raises(ValueError):
        SolverSettings(eps_abs=0.0)
    assert SolverSettings.with_tolerance(1e-5).eps_rel == 1e-5
