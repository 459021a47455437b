"""ARIMA(p, d, q) by conditional least squares.

Sign convention follows the Box-Jenkins form used throughout the package::

    w_t = c + sum_i phi_i w_{t-i} + eps_t - sum_j theta_j eps_{t-j}

where ``w`` is the d-times differenced series. The intercept is estimated only
when ``d == 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.signal import lfilter

from .errors import (
    DegenerateInputError,
    ForecastError,
    InvalidArgumentError,
    ModelFitError,
    SingularMatrixError,
)
from .linalg import solve_linear_system
from .optim import nelder_mead
from .series import (
    as_series,
    difference,
    extend_integrate,
    is_constant,
    sample_autocorrelation,
)

log = logging.getLogger(__name__)

MAX_P = 5
MAX_Q = 5
MAX_D = 2
PENALTY = 1e10


@dataclass(frozen=True, order=True)
class ArimaOrder:
    p: int
    d: int
    q: int

    def __post_init__(self):
        for name, value, hi in (("p", self.p, MAX_P), ("d", self.d, MAX_D), ("q", self.q, MAX_Q)):
            if not isinstance(value, (int, np.integer)) or not 0 <= value <= hi:
                raise InvalidArgumentError(f"ARIMA {name} must be an integer in [0, {hi}], got {value!r}")

    @classmethod
    def parse(cls, text: str) -> "ArimaOrder":
        try:
            p, d, q = (int(x) for x in text.replace(" ", "").split(","))
        except ValueError:
            raise InvalidArgumentError(f"expected 'p,d,q', got {text!r}") from None
        return cls(p, d, q)

    def __str__(self):
        return f"({self.p},{self.d},{self.q})"


@dataclass(frozen=True)
class ArimaModel:
    order: ArimaOrder
    phi: np.ndarray
    theta: np.ndarray
    intercept: float
    sigma2: float
    residuals: np.ndarray
    sse: float
    aic: float
    n_effective: int
    intercept_free: bool = True
    converged: bool = True
    iterations: int = 0

    @property
    def n_params(self) -> int:
        return self.order.p + self.order.q + int(self.intercept_free) + 1


def spectral_radius(coefs) -> float:
    """Largest root modulus of z^k - a_1 z^(k-1) - ... - a_k.

    Below one exactly when 1 - sum a_i z^i has every root outside the unit
    circle, i.e. the AR part is stationary (or the MA part invertible).
    """
    a = np.asarray(coefs, dtype=float)
    if a.size == 0:
        return 0.0
    if a.size == 1:
        return abs(float(a[0]))
    roots = np.roots(np.concatenate(([1.0], -a)))
    return float(np.max(np.abs(roots))) if roots.size else 0.0


def css_residuals(phi, theta, intercept, w) -> np.ndarray:
    """Residual recursion conditioned on the first p values and zero pre-sample errors."""
    w = np.asarray(w, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    p = phi.size
    n = w.size
    u = np.zeros(n)
    u[p:] = w[p:] - intercept
    for i in range(1, p + 1):
        u[p:] -= phi[i - 1] * w[p - i:n - i]
    if theta.size == 0:
        return u
    return lfilter([1.0], np.concatenate(([1.0], -theta)), u)


def css_objective(phi, theta, intercept, w):
    """Conditional sum of squares.

    Returns
    -------
    sse : float
        Sum of squared residuals over t = p+1..n.
    residuals : ndarray
        Length-n residual sequence; the first p entries are the conditioning
        zeros.
    """
    w = np.asarray(w, dtype=float)
    p = len(phi)
    if w.size <= p:
        raise InvalidArgumentError(f"CSS with p={p} needs more than {p} values, got {w.size}")
    resid = css_residuals(phi, theta, intercept, w)
    return float(np.dot(resid, resid)), resid


def yule_walker_init(w, p: int) -> np.ndarray:
    """AR starting values from the Toeplitz Yule-Walker system; zeros on failure."""
    if p == 0:
        return np.zeros(0)
    try:
        r = sample_autocorrelation(w, p)
        idx = np.arange(p)
        R = r[np.abs(idx[:, None] - idx[None, :])]
        phi = solve_linear_system(R, r[1:])
    except (DegenerateInputError, SingularMatrixError, InvalidArgumentError):
        return np.zeros(p)
    if not np.all(np.isfinite(phi)) or spectral_radius(phi) >= 1.0:
        return np.zeros(p)
    return phi


def _unpack(x, p, q, intercept_free):
    phi = x[:p]
    theta = x[p:p + q]
    c = x[p + q] if intercept_free else 0.0
    return phi, theta, c


def fit_arima(train, order: ArimaOrder) -> ArimaModel:
    """Fit by minimising the CSS objective with Nelder-Mead.

    Parameters violating stationarity or invertibility score
    ``1e10 * (1 + excess spectral radius)``. Hitting the iteration cap returns
    the best point found with ``converged=False``.
    """
    train = as_series(train)
    p, d, q = order.p, order.d, order.q
    need = 10 + d + p + q
    if len(train) < need:
        raise InvalidArgumentError(f"ARIMA{order} needs at least {need} observations, got {len(train)}")
    w = difference(train, d).values
    if is_constant(w):
        raise DegenerateInputError(f"series is constant after {d} difference(s)")

    intercept_free = d == 0
    phi0 = yule_walker_init(w, p)
    x0 = list(phi0) + [0.0] * q
    if intercept_free:
        # implied intercept for the series mean given the AR start
        x0.append(float(np.mean(w)) * (1.0 - float(np.sum(phi0))))
    x0 = np.array(x0, dtype=float)

    def objective(x):
        phi, theta, c = _unpack(x, p, q, intercept_free)
        rad_phi = spectral_radius(phi)
        rad_theta = spectral_radius(theta)
        if rad_phi >= 1.0 or rad_theta >= 1.0:
            return PENALTY * (1.0 + max(rad_phi - 1.0, 0.0) + max(rad_theta - 1.0, 0.0))
        resid = css_residuals(phi, theta, c, w)
        sse = float(np.dot(resid, resid))
        return sse if math.isfinite(sse) else PENALTY

    result = nelder_mead(objective, x0, step=0.1)
    if not result.converged:
        log.debug("ARIMA%s: Nelder-Mead stopped at the iteration cap (%d)", order, result.iterations)
    phi, theta, c = _unpack(result.x, p, q, intercept_free)
    if spectral_radius(phi) >= 1.0 or spectral_radius(theta) >= 1.0:
        raise ModelFitError("ARIMA", f"no stationary, invertible solution found for order {order}")
    sse, resid = css_objective(phi, theta, c, w)
    n_eff = w.size - p
    sigma2 = max(sse / n_eff, np.finfo(float).tiny)
    k = p + q + int(intercept_free) + 1
    aic = n_eff * math.log(sigma2) + 2 * k
    resid.setflags(write=False)
    return ArimaModel(
        order=order,
        phi=np.array(phi, dtype=float),
        theta=np.array(theta, dtype=float),
        intercept=float(c),
        sigma2=sigma2,
        residuals=resid,
        sse=sse,
        aic=aic,
        n_effective=n_eff,
        intercept_free=intercept_free,
        converged=result.converged,
        iterations=result.iterations,
    )


def choose_d(s, max_d: int = MAX_D) -> int:
    """Smallest d whose differenced series looks stationary.

    A candidate qualifies when its lag-1 autocorrelation is below 0.95 and its
    standard deviation did not grow relative to d - 1. Falls back to the d
    with the smallest differenced standard deviation.
    """
    x = as_series(s).values
    stds = []
    prev_std = None
    for d in range(max_d + 1):
        w = difference(x, d).values
        std = float(np.std(w, ddof=1)) if w.size > 1 else 0.0
        stds.append(std)
        try:
            r1 = sample_autocorrelation(w, 1)[1]
        except DegenerateInputError:
            r1 = 0.0
        if r1 < 0.95 and (prev_std is None or std <= prev_std):
            return d
        prev_std = std
    return int(np.argmin(stds))


@dataclass(frozen=True)
class Candidate:
    order: ArimaOrder
    aic: float
    model: Optional[ArimaModel] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class OrderSearch:
    order: ArimaOrder
    model: ArimaModel
    candidates: List[Candidate] = field(default_factory=list)


def search_orders(train, max_p: int = MAX_P, max_q: int = MAX_Q, d: Optional[int] = None) -> OrderSearch:
    """Fit every (p, q) for the chosen d and keep the full candidate table."""
    train = as_series(train)
    if d is None:
        d = choose_d(train)
    candidates = []
    last_error: Optional[Exception] = None
    for p in range(max_p + 1):
        for q in range(max_q + 1):
            order = ArimaOrder(p, d, q)
            try:
                model = fit_arima(train, order)
            except ForecastError as exc:
                last_error = exc
                candidates.append(Candidate(order, math.inf, None, str(exc)))
                continue
            candidates.append(Candidate(order, model.aic, model))
    fitted = [c for c in candidates if c.model is not None and math.isfinite(c.aic)]
    if not fitted:
        if last_error is None:
            raise ModelFitError("ARIMA", "no candidate order could be fitted")
        raise last_error
    best = min(fitted, key=lambda c: (c.aic, c.order.p + c.order.q, c.order.p))
    return OrderSearch(best.order, best.model, candidates)


def auto_order(train, max_p: int = MAX_P, max_q: int = MAX_Q):
    """Minimum-AIC order over p, q in [0, max] with d from :func:`choose_d`."""
    res = search_orders(train, max_p, max_q)
    return res.order, res.model


def rolling_forecast(model: ArimaModel, train, test) -> np.ndarray:
    """One-step-ahead forecasts over ``test`` with frozen parameters.

    Each step conditions on every observation before it, actual test values
    included, and on the residuals those observations realise.
    """
    train = as_series(train)
    test = as_series(test)
    d, p, q = model.order.d, model.order.p, model.order.q
    n_train = len(train)
    if n_train <= d + p:
        raise InvalidArgumentError(f"ARIMA{model.order} forecasting needs more than {d + p} training values")
    full = np.concatenate((train.values, test.values))
    w = difference(full, d).values
    eps = css_residuals(model.phi, model.theta, model.intercept, w)

    idx = np.arange(n_train - d, full.size - d)
    pred_w = np.full(idx.size, model.intercept, dtype=float)
    for i in range(1, p + 1):
        pred_w += model.phi[i - 1] * w[idx - i]
    for j in range(1, q + 1):
        pred_w -= model.theta[j - 1] * eps[idx - j]

    if d == 0:
        return pred_w
    out = np.empty(idx.size)
    for k in range(idx.size):
        r = n_train + k
        out[k] = extend_integrate(full[r - d:r], d, pred_w[k])
    return out
