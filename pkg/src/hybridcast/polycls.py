"""Polynomial classifier forecaster.

Lagged windows are expanded into every monomial of total degree <= K and a
linear readout is trained in closed form by least squares. Forecasting is
one step ahead from the most recent L observations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import ForecastError, InvalidArgumentError
from .linalg import SolveReport, solve_least_squares
from .series import as_series, build_windows, train_test_split

MAX_DEGREE = 3
DEFAULT_L_GRID = (2, 3, 4, 6, 8, 12)
DEFAULT_K_GRID = (1, 2, 3)


def _compositions(total: int, parts: int):
    """All length-``parts`` tuples of non-negative ints summing to ``total``,
    lexicographically descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class MonomialBasis:
    window_len: int
    degree: int
    exponents: np.ndarray  # (m, L) integer exponent table

    @property
    def size(self) -> int:
        return int(self.exponents.shape[0])

    def labels(self, var: str = "t") -> list:
        out = []
        for row in self.exponents:
            parts = []
            for i, e in enumerate(row, start=1):
                if e == 1:
                    parts.append(f"{var}{i}")
                elif e > 1:
                    parts.append(f"{var}{i}^{e}")
            out.append("*".join(parts) or "1")
        return out


def build_basis(window_len: int, degree: int) -> MonomialBasis:
    """Monomials ordered by total degree, then lexicographically descending.

    For L=2, K=2 this gives 1, t1, t2, t1^2, t1*t2, t2^2.
    """
    if window_len < 1:
        raise InvalidArgumentError(f"window length must be >= 1, got {window_len}")
    if not 1 <= degree <= MAX_DEGREE:
        raise InvalidArgumentError(f"degree must be in 1..{MAX_DEGREE}, got {degree}")
    rows = [c for n in range(degree + 1) for c in _compositions(n, window_len)]
    exps = np.array(rows, dtype=np.int64).reshape(-1, window_len)
    exps.setflags(write=False)
    return MonomialBasis(window_len, degree, exps)


def expand_rows(Y: np.ndarray, basis: MonomialBasis) -> np.ndarray:
    """Expand each row of an (N, L) matrix into its (N, m) monomial features."""
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[1] != basis.window_len:
        raise InvalidArgumentError(
            f"expected rows of length {basis.window_len}, got shape {Y.shape}"
        )
    # powers[k] = Y**k, so every monomial is a product of table lookups
    powers = [np.ones_like(Y)]
    for _ in range(basis.degree):
        powers.append(powers[-1] * Y)
    M = np.ones((Y.shape[0], basis.size))
    cols = np.arange(basis.window_len)
    for j, row in enumerate(basis.exponents):
        for i in cols[row > 0]:
            M[:, j] *= powers[row[i]][:, i]
    return M


def expand(y: Sequence[float], basis: MonomialBasis) -> np.ndarray:
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != basis.window_len:
        raise InvalidArgumentError(f"expected {basis.window_len} values, got {y.size}")
    return expand_rows(y[None, :], basis)[0]


@dataclass(frozen=True)
class PolyModel:
    basis: MonomialBasis
    weights: np.ndarray
    train_sse: float
    solve_report: SolveReport

    @property
    def window_len(self) -> int:
        return self.basis.window_len

    @property
    def degree(self) -> int:
        return self.basis.degree


def min_train_length(window_len: int, degree: int) -> int:
    m = math.comb(window_len + degree, degree)
    return window_len + m + 1


def fit_pc(train, window_len: int, degree: int) -> PolyModel:
    train = as_series(train)
    basis = build_basis(window_len, degree)
    need = min_train_length(window_len, degree)
    if len(train) < need:
        raise InvalidArgumentError(
            f"PC with L={window_len}, K={degree} needs at least {need} training values, got {len(train)}"
        )
    wm = build_windows(train, window_len)
    M = expand_rows(wm.rows, basis)
    w, report = solve_least_squares(M, wm.targets)
    r = M @ w - wm.targets
    w.setflags(write=False)
    return PolyModel(basis, w, float(r @ r), report)


def forecast_pc(model: PolyModel, recent: Sequence[float]) -> float:
    return float(model.weights @ expand(recent, model.basis))


def rolling_forecast_pc(model: PolyModel, train, test) -> np.ndarray:
    """One-step forecasts over ``test``; windows slide over actual values."""
    train = as_series(train)
    test = as_series(test)
    L = model.window_len
    if len(train) < L:
        raise InvalidArgumentError(f"PC forecasting needs at least {L} training values, got {len(train)}")
    full = np.concatenate((train.values[-L:], test.values))
    rows = np.lib.stride_tricks.sliding_window_view(full, L)[:-1]
    return expand_rows(rows, model.basis) @ model.weights


def _rmse(a, b) -> float:
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return float(np.sqrt(np.mean(diff * diff)))


def score_pc_configs(train, L_grid: Iterable[int] = DEFAULT_L_GRID,
                     K_grid: Iterable[int] = DEFAULT_K_GRID,
                     validation_fraction: float = 0.2) -> list:
    """Validation RMSE for every feasible (L, K) as ``(L, K, rmse)`` triples.

    The first 80% of ``train`` fits each candidate and the last 20% scores its
    rolling one-step forecasts. Candidates too large for the fitting part are
    skipped.
    """
    train = as_series(train)
    fit_part, val_part = train_test_split(train, 1.0 - validation_fraction, min_train=1)
    scores = []
    for K in sorted(set(K_grid)):
        for L in sorted(set(L_grid)):
            if len(fit_part) < min_train_length(L, K):
                continue
            try:
                model = fit_pc(fit_part, L, K)
            except ForecastError:
                continue
            score = _rmse(val_part.values, rolling_forecast_pc(model, fit_part, val_part))
            if math.isfinite(score):
                scores.append((L, K, score))
    return scores


def select_pc_config(train, L_grid: Iterable[int] = DEFAULT_L_GRID,
                     K_grid: Iterable[int] = DEFAULT_K_GRID) -> Tuple[int, int]:
    """(L, K) with the lowest validation RMSE; ties go to smaller K, then smaller L."""
    scores = score_pc_configs(train, L_grid, K_grid)
    if not scores:
        raise InvalidArgumentError(
            f"no (L, K) candidate is feasible for a training series of length {len(as_series(train))}"
        )
    L, K, _ = min(scores, key=lambda s: (s[2], s[1], s[0]))
    return L, K
