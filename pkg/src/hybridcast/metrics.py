"""Forecast accuracy metrics: MAE, RMSE and CV(RMSE) in percent."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError


@dataclass(frozen=True)
class MetricsReport:
    mae: float
    rmse: float
    cv_rmse_percent: float
    n: int
    wall_seconds: float = 0.0

    # column order of the published comparison tables
    COLUMNS = ("Time (s)", "MAE", "RMSE", "CV(RMSE)%")

    def row(self):
        return (self.wall_seconds, self.mae, self.rmse, self.cv_rmse_percent)


def _pair(obs, pred):
    o = np.asarray(obs, dtype=float).reshape(-1)
    p = np.asarray(pred, dtype=float).reshape(-1)
    if o.size != p.size:
        raise InvalidArgumentError(f"observed has {o.size} values, predicted {p.size}")
    if o.size == 0:
        raise InvalidArgumentError("metrics need at least one observation")
    return o, p


def mae(obs, pred) -> float:
    o, p = _pair(obs, pred)
    return float(np.mean(np.abs(o - p)))


def rmse(obs, pred) -> float:
    o, p = _pair(obs, pred)
    r = o - p
    return float(math.sqrt(np.mean(r * r)))


def cv_rmse(obs, pred) -> float:
    """RMSE as a percentage of the mean observation."""
    o, p = _pair(obs, pred)
    mean = float(np.mean(o))
    if mean == 0.0:
        raise DegenerateInputError("CV(RMSE) is undefined when the observed mean is zero")
    return 100.0 * rmse(o, p) / mean


def evaluate(obs, pred, wall_seconds: float = 0.0) -> MetricsReport:
    o, p = _pair(obs, pred)
    if wall_seconds < 0:
        raise InvalidArgumentError(f"wall time must be >= 0, got {wall_seconds}")
    return MetricsReport(mae(o, p), rmse(o, p), cv_rmse(o, p), int(o.size), float(wall_seconds))
