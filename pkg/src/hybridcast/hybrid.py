"""Parallel ARIMA + polynomial-classifier hybrid.

Both components forecast independently and the outputs are blended as
``omega * arima + (1 - omega) * pc``. The weight minimises the squared error
of the blend on a fitting window and is clipped to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .arima import ArimaModel, ArimaOrder, auto_order, fit_arima, rolling_forecast
from .errors import ForecastError, InvalidArgumentError, ModelFitError
from .polycls import PolyModel, fit_pc, rolling_forecast_pc, select_pc_config
from .series import as_series, train_test_split

VALIDATION_TAIL = "validation-tail"
IN_SAMPLE = "in-sample"
OMEGA_MODES = (VALIDATION_TAIL, IN_SAMPLE)
DEGENERATE_RTOL = 1e-12


def _check_aligned(*seqs):
    arrays = [np.asarray(s, dtype=float).reshape(-1) for s in seqs]
    n = arrays[0].size
    if any(a.size != n for a in arrays):
        raise InvalidArgumentError(f"sequence lengths differ: {[a.size for a in arrays]}")
    if n == 0:
        raise InvalidArgumentError("sequences must be non-empty")
    return arrays


@dataclass(frozen=True)
class OmegaFit:
    omega: float
    omega_unclipped: float
    degenerate: bool = False

    def __iter__(self):
        # unpacks as (omega, omega_unclipped)
        yield self.omega
        yield self.omega_unclipped


def optimal_omega(y_true, y_arima, y_pc) -> OmegaFit:
    """Closed-form minimiser of sum((y - (w*a + (1-w)*p))**2), clipped to [0, 1].

    When the two forecasts coincide (squared gap below 1e-12 of their energy)
    the weight is unidentifiable and 0.5 is returned with ``degenerate`` set.
    """
    y, a, p = _check_aligned(y_true, y_arima, y_pc)
    gap = a - p
    denom = float(gap @ gap)
    scale = float(a @ a + p @ p)
    if denom <= DEGENERATE_RTOL * scale or denom == 0.0:
        return OmegaFit(0.5, 0.5, True)
    raw = float(gap @ (y - p)) / denom
    return OmegaFit(min(1.0, max(0.0, raw)), raw, False)


def combine(y_arima, y_pc, omega: float) -> np.ndarray:
    a, p = _check_aligned(y_arima, y_pc)
    if not 0.0 <= omega <= 1.0:
        raise InvalidArgumentError(f"omega must lie in [0, 1], got {omega}")
    if omega == 1.0:
        return a.copy()
    if omega == 0.0:
        return p.copy()
    return omega * a + (1.0 - omega) * p


@dataclass(frozen=True)
class OmegaWindow:
    mode: str
    start: int  # first training index whose forecast enters the fit
    stop: int
    y_true: np.ndarray
    y_arima: np.ndarray
    y_pc: np.ndarray

    def mse(self, omega: float) -> float:
        r = self.y_true - combine(self.y_arima, self.y_pc, omega)
        return float(np.mean(r * r))


@dataclass(frozen=True)
class HybridModel:
    arima: ArimaModel
    pc: PolyModel
    omega: float
    omega_unclipped: float
    omega_window: Optional[OmegaWindow]
    degenerate: bool = False
    omega_fixed: bool = False


ArimaSpec = Union[ArimaOrder, str, None]
PCSpec = Union[Tuple[int, int], str, None]


def resolve_configs(train, arima_order: ArimaSpec = "auto", pc_config: PCSpec = "auto"):
    """Turn "auto" specs into concrete (ArimaOrder, (L, K)) for ``train``."""
    if arima_order in (None, "auto"):
        try:
            arima_order, _ = auto_order(train)
        except ForecastError as exc:
            raise ModelFitError("ARIMA", f"order search failed: {exc}") from exc
    if pc_config in (None, "auto"):
        try:
            pc_config = select_pc_config(train)
        except ForecastError as exc:
            raise ModelFitError("PC", f"configuration search failed: {exc}") from exc
    return arima_order, tuple(pc_config)


def _fit_components(train, order: ArimaOrder, pc_config):
    try:
        arima = fit_arima(train, order)
    except ModelFitError:
        raise
    except ForecastError as exc:
        raise ModelFitError("ARIMA", str(exc)) from exc
    try:
        pc = fit_pc(train, *pc_config)
    except ForecastError as exc:
        raise ModelFitError("PC", str(exc)) from exc
    return arima, pc


def fit_hybrid(train, arima_order: ArimaSpec = "auto", pc_config: PCSpec = "auto",
               omega_mode: str = VALIDATION_TAIL, fit_fraction: float = 0.8,
               omega: Optional[float] = None) -> HybridModel:
    """Fit both components and the combination weight.

    ``validation-tail`` fits the components on the first ``fit_fraction`` of
    ``train``, derives the weight from their rolling one-step forecasts over
    the remainder, then refits both components on all of ``train``.
    ``in-sample`` uses one-step fitted values over ``train`` from components
    fitted on the whole of it. Passing ``omega`` skips estimation.
    """
    train = as_series(train)
    if omega_mode not in OMEGA_MODES:
        raise InvalidArgumentError(f"omega mode must be one of {OMEGA_MODES}, got {omega_mode!r}")
    order, pc_config = resolve_configs(train, arima_order, pc_config)
    L = pc_config[0]

    if omega is not None:
        if not 0.0 <= omega <= 1.0:
            raise InvalidArgumentError(f"omega must lie in [0, 1], got {omega}")
        arima, pc = _fit_components(train, order, pc_config)
        return HybridModel(arima, pc, float(omega), float(omega), None, False, True)

    # the window must start after both models have enough history
    warmup = max(L, order.d + order.p) + 1
    if omega_mode == VALIDATION_TAIL:
        head, tail = train_test_split(train, fit_fraction, min_train=1)
        if len(head) < warmup:
            raise InvalidArgumentError(
                f"omega fitting prefix of {len(head)} points is shorter than the {warmup} required"
            )
        a_head, p_head = _fit_components(head, order, pc_config)
        y_arima = rolling_forecast(a_head, head, tail)
        y_pc = rolling_forecast_pc(p_head, head, tail)
        arima, pc = _fit_components(train, order, pc_config)
        start = len(head)
        y_true = tail.values
    else:
        arima, pc = _fit_components(train, order, pc_config)
        start = warmup
        head, rest = train.slice(0, start), train.slice(start)
        y_arima = rolling_forecast(arima, head, rest)
        y_pc = rolling_forecast_pc(pc, head, rest)
        y_true = rest.values

    fit = optimal_omega(y_true, y_arima, y_pc)
    window = OmegaWindow(omega_mode, start, len(train), np.array(y_true), y_arima, y_pc)
    return HybridModel(arima, pc, fit.omega, fit.omega_unclipped, window, fit.degenerate)


@dataclass(frozen=True)
class HybridForecast:
    hybrid: np.ndarray
    arima: np.ndarray
    pc: np.ndarray


def rolling_forecast_components(model: HybridModel, train, test) -> HybridForecast:
    a = rolling_forecast(model.arima, train, test)
    p = rolling_forecast_pc(model.pc, train, test)
    return HybridForecast(combine(a, p, model.omega), a, p)


def rolling_forecast_hybrid(model: HybridModel, train, test) -> np.ndarray:
    return rolling_forecast_components(model, train, test).hybrid
