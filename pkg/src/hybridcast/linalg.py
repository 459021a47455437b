"""Small dense linear algebra: Householder least squares and square solves.

Problem sizes here stay below a few thousand rows by a few hundred columns,
so everything is written directly on numpy arrays without LAPACK calls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, SingularMatrixError

# cond(M^T M) above this switches the least-squares solve to ridge
COND_LIMIT = 1e12
RIDGE_SCALE = 1e-8
REFINE_STEPS = 8


@dataclass(frozen=True)
class SolveReport:
    method: str  # "qr" | "cholesky" | "ridge-fallback"
    residual_norm: float
    ridge_lambda: float = 0.0
    cond_estimate: float = 1.0


def _as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=float)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidArgumentError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidArgumentError("matrix contains non-finite entries")
    return A


def _as_vector(t, n: int, what: str = "right-hand side") -> np.ndarray:
    v = np.array(t, dtype=float).reshape(-1)
    if v.size != n:
        raise InvalidArgumentError(f"{what} has length {v.size}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError(f"{what} contains non-finite entries")
    return v


def householder_qr(A: np.ndarray):
    """Compact Householder QR of an n x m matrix with n >= m.

    Returns ``(V, R)`` where the columns of ``V`` are the unit Householder
    vectors (Q = H_0 H_1 ... H_{m-1}, H_k = I - 2 v_k v_k^T) and ``R`` is the
    m x m upper-triangular factor.
    """
    A = np.array(A, dtype=float)
    n, m = A.shape
    if n < m:
        raise InvalidArgumentError(f"QR needs rows >= cols, got {n} x {m}")
    V = np.zeros((n, m))
    for k in range(m):
        x = A[k:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        # sign choice avoids cancellation in v[0]
        v[0] += alpha if x[0] >= 0 else -alpha
        v /= np.linalg.norm(v)
        V[k:, k] = v
        A[k:, k:] -= 2.0 * np.outer(v, v @ A[k:, k:])
    return V, np.triu(A[:m, :])


def apply_qt(V: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Compute Q^T b from the compact Householder vectors."""
    y = np.array(b, dtype=float)
    for k in range(V.shape[1]):
        v = V[k:, k]
        y[k:] -= 2.0 * v * (v @ y[k:])
    return y


def back_substitute(R: np.ndarray, y: np.ndarray) -> np.ndarray:
    m = R.shape[0]
    x = np.zeros(m)
    for i in range(m - 1, -1, -1):
        x[i] = (y[i] - R[i, i + 1:] @ x[i + 1:]) / R[i, i]
    return x


def _qr_solve(A: np.ndarray, t: np.ndarray):
    V, R = householder_qr(A)
    y = apply_qt(V, t)
    diag = np.abs(np.diag(R))
    dmax = diag.max()
    dmin = diag.min()
    cond = np.inf if dmin == 0.0 else (dmax / dmin) ** 2
    return V, R, y, cond


def solve_least_squares(M, t):
    """Minimise ``||M w - t||^2``.

    Householder QR on ``M`` is the primary path. When ``M^T M`` looks
    numerically singular (squared ratio of extreme ``|R_ii|`` above 1e12) or
    the system is underdetermined, the ridge system
    ``(M^T M + lam I) w = M^T t`` with ``lam = 1e-8 * trace(M^T M) / m`` is
    solved instead, through QR of the augmented matrix ``[M; sqrt(lam) I]``,
    followed by a few iterated-Tikhonov refinement steps on the residual.

    Returns
    -------
    w : ndarray of shape (m,)
    report : SolveReport
    """
    A = _as_matrix(M)
    n, m = A.shape
    t = _as_vector(t, n)

    cond = np.inf
    if n >= m:
        _, R, y, cond = _qr_solve(A, t)
        if cond <= COND_LIMIT:
            w = back_substitute(R, y[:m])
            resid = float(np.linalg.norm(A @ w - t))
            return w, SolveReport("qr", resid, 0.0, float(cond))

    lam = RIDGE_SCALE * float(np.sum(A * A)) / m
    if lam == 0.0:
        # all-zero design: the minimum-norm minimiser is zero
        w = np.zeros(m)
        return w, SolveReport("ridge-fallback", float(np.linalg.norm(t)), np.finfo(float).tiny, float(cond))
    aug = np.vstack([A, np.sqrt(lam) * np.eye(m)])
    V, R = householder_qr(aug)
    pad = np.zeros(m)

    def ridge_step(rhs):
        return back_substitute(R, apply_qt(V, np.concatenate([rhs, pad]))[:m])

    w = ridge_step(t)
    resid = float(np.linalg.norm(A @ w - t))
    # iterated Tikhonov: strips the ridge bias from well-determined directions
    # while directions with singular values far below sqrt(lam) stay damped
    for _ in range(REFINE_STEPS):
        w_next = w + ridge_step(t - A @ w)
        r_next = float(np.linalg.norm(A @ w_next - t))
        if not r_next < resid:
            break
        w, resid = w_next, r_next
    return w, SolveReport("ridge-fallback", resid, lam, float(cond))


def solve_linear_system(A, b) -> np.ndarray:
    """Gaussian elimination with partial pivoting.

    Raises SingularMatrixError when a pivot vanishes relative to the matrix
    scale; callers decide on a fallback.
    """
    A = _as_matrix(A)
    n = A.shape[0]
    if A.shape[1] != n:
        raise InvalidArgumentError(f"square matrix required, got {A.shape}")
    x = _as_vector(b, n).copy()
    A = A.copy()
    tol = n * np.finfo(float).eps * max(float(np.max(np.abs(A))), np.finfo(float).tiny)
    for k in range(n):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[piv, k]) <= tol:
            raise SingularMatrixError(f"matrix is singular to working precision (column {k})")
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            x[[k, piv]] = x[[piv, k]]
        factors = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= np.outer(factors, A[k, k:])
        x[k + 1:] -= factors * x[k]
    return back_substitute(np.triu(A), x)
