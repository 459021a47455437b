"""Deterministic Nelder-Mead simplex minimiser."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MinimizeResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool


def nelder_mead(func, x0, step=0.1, ftol=1e-10, max_iter=None,
                alpha=1.0, gamma=2.0, rho=0.5, sigma=0.5) -> MinimizeResult:
    """Minimise ``func`` from ``x0`` with the classic Nelder-Mead simplex.

    The initial simplex is ``x0`` plus ``step`` along each coordinate axis, so
    runs are reproducible. Iteration stops once the spread of objective
    values across the simplex drops below ``ftol * max(1, |f_best|)`` or
    after ``max_iter`` iterations (default ``200 * dim``).

    Parameters
    ----------
    func : callable
        Maps a 1-D float array to a float.
    x0 : array_like
        Starting point.
    step : float or array_like
        Edge length of the initial simplex per coordinate.
    alpha, gamma, rho, sigma : float
        Reflection, expansion, contraction and shrink coefficients.
    """
    x0 = np.array(x0, dtype=float).reshape(-1)
    dim = x0.size
    if max_iter is None:
        max_iter = 200 * max(dim, 1)
    if dim == 0:
        return MinimizeResult(x0, float(func(x0)), 0, 1, True)

    steps = np.broadcast_to(np.asarray(step, dtype=float), (dim,))
    simplex = np.empty((dim + 1, dim))
    simplex[0] = x0
    for i in range(dim):
        simplex[i + 1] = x0
        simplex[i + 1, i] += steps[i]
    fvals = np.array([func(p) for p in simplex], dtype=float)
    nfev = dim + 1

    converged = False
    it = 0
    while it < max_iter:
        order = np.argsort(fvals, kind="stable")
        simplex = simplex[order]
        fvals = fvals[order]
        if fvals[-1] - fvals[0] <= ftol * max(1.0, abs(fvals[0])):
            converged = True
            break
        it += 1

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + alpha * (centroid - worst)
        fr = func(xr)
        nfev += 1
        if fr < fvals[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = func(xe)
            nfev += 1
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
            continue

        if fr < fvals[-1]:
            xc = centroid + rho * (xr - centroid)
            fc = func(xc)
            nfev += 1
            if fc <= fr:
                simplex[-1], fvals[-1] = xc, fc
                continue
        else:
            xc = centroid + rho * (worst - centroid)
            fc = func(xc)
            nfev += 1
            if fc < fvals[-1]:
                simplex[-1], fvals[-1] = xc, fc
                continue

        best = simplex[0]
        for i in range(1, dim + 1):
            simplex[i] = best + sigma * (simplex[i] - best)
            fvals[i] = func(simplex[i])
        nfev += dim

    i_best = int(np.argmin(fvals))
    return MinimizeResult(simplex[i_best].copy(), float(fvals[i_best]), it, nfev, converged)
