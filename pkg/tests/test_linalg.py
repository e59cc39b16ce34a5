import numpy as np
import pytest

from proxcert.linalg import (CGError, DenseOperator, IdentityOperator,
                             PowerIterationError, as_vector, cg_solve,
                             load_matrix_txt, power_iteration,
                             save_matrix_txt, tv_operator)

from oracles import gauss_solve, jacobi_eigenvalues


def test_as_vector_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_vector([1.0, np.nan])
    with pytest.raises(ValueError):
        as_vector([np.inf])
    with pytest.raises(ValueError):
        as_vector(np.zeros((2, 2)))


def test_power_iteration_identity():
    assert power_iteration(IdentityOperator(3)) == pytest.approx(1.0, rel=1e-10)


def test_power_iteration_diagonal():
    op = DenseOperator(np.diag([1.0, 2.0, 3.0]))
    assert power_iteration(op) == pytest.approx(9.0, rel=1e-10)


def test_power_iteration_matches_jacobi_oracle():
    rng = np.random.default_rng(7)
    mat = rng.standard_normal((5, 3))
    est = power_iteration(DenseOperator(mat), tol=1e-12, seed=7)
    oracle = jacobi_eigenvalues(mat.T @ mat)[-1]
    assert est == pytest.approx(oracle, rel=1e-8)


def test_power_iteration_random_diagonals_property():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(2, 12))
        d = rng.random(n) * 5.0
        est = power_iteration(DenseOperator(np.diag(d)), tol=1e-12)
        assert est == pytest.approx(np.max(d) ** 2, rel=1e-9)


def test_power_iteration_nonconvergence_error():
    op = DenseOperator(np.diag([1.0, 1.0 - 1e-13]))
    with pytest.raises(PowerIterationError) as info:
        power_iteration(op, tol=1e-16, max_iter=3)
    assert info.value.last_estimate == pytest.approx(1.0, rel=1e-6)


def test_cg_identity_and_diagonal():
    x = cg_solve(IdentityOperator(2), np.array([3.0, -1.0]))
    assert np.allclose(x, [3.0, -1.0], atol=1e-12)
    x = cg_solve(DenseOperator(np.diag([2.0, 4.0])), np.array([2.0, 8.0]))
    assert np.allclose(x, [1.0, 2.0], atol=1e-10)


def test_cg_matches_elimination_oracle():
    rng = np.random.default_rng(11)
    m = rng.standard_normal((20, 20))
    spd = m.T @ m + np.eye(20)
    rhs = rng.standard_normal(20)
    x = cg_solve(DenseOperator(spd), rhs, tol=1e-12)
    oracle = gauss_solve(spd, rhs)
    assert np.linalg.norm(x - oracle) <= 1e-8 * np.linalg.norm(oracle)


def test_cg_breakdown_on_indefinite():
    op = DenseOperator(np.diag([1.0, -1.0]))
    with pytest.raises(CGError):
        cg_solve(op, np.array([1.0, 1.0]))


def test_cg_budget_error_carries_iterate():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((30, 30))
    spd = m.T @ m + 0.01 * np.eye(30)
    with pytest.raises(CGError) as info:
        cg_solve(DenseOperator(spd), rng.standard_normal(30), tol=1e-14, max_iter=2)
    assert info.value.residual_norm > 0
    assert info.value.x.shape == (30,)


def test_tv_constant_image():
    op = tv_operator(4, 5)
    out = op.forward(np.full(20, 5.0))
    assert np.all(out == 0.0)


def test_tv_2x2_frozen_vector():
    # image [[0,1],[0,1]]: horizontal diffs 1 at column 0, 0 at the
    # boundary column; vertical diffs all 0; interleaved (dx, dy) layout
    op = tv_operator(2, 2)
    out = op.forward(np.array([0.0, 1.0, 0.0, 1.0]))
    assert np.array_equal(out, np.array([1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]))


def test_tv_adjoint_consistency_8x8():
    op = tv_operator(8, 8)
    rng = np.random.default_rng(5)
    for _ in range(100):
        u = rng.standard_normal(op.in_dim)
        v = rng.standard_normal(op.out_dim)
        lhs = float(op.forward(u) @ v)
        rhs = float(u @ op.adjoint(v))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


def test_dense_adjoint_consistency():
    rng = np.random.default_rng(9)
    op = DenseOperator(rng.standard_normal((6, 4)))
    for _ in range(50):
        u = rng.standard_normal(4)
        v = rng.standard_normal(6)
        lhs = float(op.forward(u) @ v)
        rhs = float(u @ op.adjoint(v))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_tv_rejects_zero_dims():
    with pytest.raises(ValueError):
        tv_operator(0, 3)


def test_matrix_txt_roundtrip(tmp_path):
    rng = np.random.default_rng(1)
    mat = rng.standard_normal((3, 4))
    path = tmp_path / "m.txt"
    save_matrix_txt(path, mat)
    back = load_matrix_txt(path)
    assert np.array_equal(back, mat)  # repr round-trips float64 exactly
    with open(path) as fh:
        assert fh.readline().strip() == "3 4"
