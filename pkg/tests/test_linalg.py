import numpy as np
import pytest

from conftest import gauss_normal_equations
from hybridcast.errors import InvalidArgumentError, SingularMatrixError
from hybridcast.linalg import solve_least_squares, solve_linear_system


def test_identity_system():
    w, rep = solve_least_squares(np.eye(3), [1, 2, 3])
    np.testing.assert_allclose(w, [1, 2, 3], atol=1e-14)
    assert rep.method == "qr"
    assert rep.residual_norm == pytest.approx(0, abs=1e-14)
    assert rep.ridge_lambda == 0


def test_exact_line():
    w, rep = solve_least_squares([[1, 1], [1, 2], [1, 3]], [2, 4, 6])
    np.testing.assert_allclose(w, [0, 2], atol=1e-12)
    assert rep.residual_norm < 1e-12


def test_rank_one_uses_ridge():
    M = np.array([[1.0, 1.0], [1.0, 1.0]])
    t = np.array([1.0, 3.0])
    w, rep = solve_least_squares(M, t)
    assert rep.method == "ridge-fallback"
    assert rep.ridge_lambda > 0
    assert np.all(np.isfinite(w))
    r = M @ w - t
    assert rep.residual_norm == pytest.approx(np.linalg.norm(r))
    assert r @ r <= t @ t


def test_underdetermined_uses_ridge(rng):
    M = rng.normal(size=(3, 5))
    t = rng.normal(size=3)
    w, rep = solve_least_squares(M, t)
    assert rep.method == "ridge-fallback"
    assert np.linalg.norm(M @ w - t) <= np.linalg.norm(t)


def test_ridge_lambda_scales_with_trace():
    M = np.array([[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]])
    _, rep = solve_least_squares(M, [1, 2, 3])
    assert rep.ridge_lambda == pytest.approx(1e-8 * np.sum(M * M) / 2)


def test_oracle_agreement_100_systems():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 11))
        n = int(rng.integers(m, 4 * m + 1))
        M = rng.normal(size=(n, m))
        t = rng.normal(size=n)
        if np.linalg.cond(M) > 1e3:
            M += np.eye(n, m) * 3
        w, rep = solve_least_squares(M, t)
        ref = gauss_normal_equations(M, t)
        assert rep.method == "qr"
        worst = max(worst, np.linalg.norm(w - ref) / max(np.linalg.norm(ref), 1e-300))
    assert worst <= 1e-8


def test_normal_equation_orthogonality(rng):
    for _ in range(20):
        M = rng.normal(size=(40, 6))
        t = rng.normal(size=40)
        w, rep = solve_least_squares(M, t)
        assert rep.method == "qr"
        assert np.linalg.norm(M.T @ (M @ w - t)) <= 1e-8 * np.linalg.norm(M.T @ t) + 1e-12


def test_least_squares_input_checks():
    with pytest.raises(InvalidArgumentError):
        solve_least_squares(np.eye(2), [1, 2, 3])
    with pytest.raises(InvalidArgumentError):
        solve_least_squares([[1.0, np.inf]], [1.0])


@pytest.mark.parametrize(
    "A, b, x",
    [([[2, 0], [0, 2]], [4, 6], [2, 3]), ([[1, 2], [3, 4]], [5, 11], [1, 2])],
)
def test_linear_system_examples(A, b, x):
    np.testing.assert_allclose(solve_linear_system(A, b), x, atol=1e-12)


def test_linear_system_singular():
    with pytest.raises(SingularMatrixError):
        solve_linear_system([[1, 1], [1, 1]], [1, 2])


def test_linear_system_residual(rng):
    for n in range(1, 9):
        A = rng.normal(size=(n, n)) + n * np.eye(n)
        b = rng.normal(size=n)
        x = solve_linear_system(A, b)
        assert np.linalg.norm(A @ x - b) <= 1e-8 * np.linalg.norm(b)


def test_linear_system_requires_square():
    with pytest.raises(InvalidArgumentError):
        solve_linear_system(np.ones((2, 3)), [1, 2])
