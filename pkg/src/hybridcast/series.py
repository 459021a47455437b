"""Time-series container and the data plumbing every forecaster shares.

Differencing and its exact inverse, sliding windows, chronological splits and
the biased sample autocorrelation live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import CorruptStructureError, DegenerateInputError, InvalidArgumentError


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Ordered univariate observations with optional opaque time labels."""

    values: np.ndarray
    labels: Optional[tuple] = None
    name: str = "series"

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.size < 1:
            raise InvalidArgumentError("a time series needs at least one value")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise InvalidArgumentError(f"non-finite value at position {bad}")
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != values.size:
                raise InvalidArgumentError(
                    f"{len(labels)} labels for {values.size} values"
                )
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return int(self.values.size)

    def slice(self, start: int, stop: Optional[int] = None) -> "TimeSeries":
        labels = None if self.labels is None else self.labels[start:stop]
        return TimeSeries(self.values[start:stop], labels, self.name)


def as_series(data, name: str = "series") -> TimeSeries:
    """Wrap raw sequences; pass TimeSeries through untouched."""
    if isinstance(data, TimeSeries):
        return data
    return TimeSeries(np.asarray(data, dtype=float), None, name)


@dataclass(frozen=True)
class DifferencedSeries:
    """Result of applying the difference operator ``order`` times.

    ``heads[k]`` is the first element of the k-times differenced series, which
    is exactly what integration needs to undo pass ``k + 1``.
    """

    values: np.ndarray
    order: int
    heads: tuple = field(default_factory=tuple)
    source_len: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        object.__setattr__(self, "heads", tuple(float(h) for h in self.heads))


def difference(s, d: int) -> DifferencedSeries:
    s = as_series(s)
    if d < 0:
        raise InvalidArgumentError(f"differencing order must be >= 0, got {d}")
    n = len(s)
    if n <= d:
        raise InvalidArgumentError(
            f"differencing order {d} needs at least {d + 1} values, got {n}"
        )
    current = np.array(s.values, dtype=float)
    heads = []
    for _ in range(d):
        heads.append(current[0])
        current = np.diff(current)
    return DifferencedSeries(current, d, tuple(heads), n)


def integrate(ds: DifferencedSeries) -> TimeSeries:
    """Exact inverse of :func:`difference`."""
    if len(ds.heads) != ds.order:
        raise CorruptStructureError(
            f"differenced series of order {ds.order} carries {len(ds.heads)} heads"
        )
    current = np.array(ds.values, dtype=float)
    for head in reversed(ds.heads):
        out = np.empty(current.size + 1)
        out[0] = head
        np.cumsum(current, out=out[1:])
        out[1:] += head
        current = out
    if ds.source_len and current.size != ds.source_len:
        raise CorruptStructureError(
            f"integration produced {current.size} values, expected {ds.source_len}"
        )
    return TimeSeries(current)


def extend_integrate(last_values: Sequence[float], order: int, diff_forecast: float) -> float:
    """Map a one-step forecast on the ``order``-times differenced scale back to raw.

    ``last_values`` holds the most recent raw observations, oldest first; the
    final ``order`` of them are used.
    """
    if order < 0:
        raise InvalidArgumentError(f"order must be >= 0, got {order}")
    if order == 0:
        return float(diff_forecast)
    tail = np.asarray(last_values, dtype=float)[-order:]
    if tail.size < order:
        raise InvalidArgumentError(
            f"undoing order-{order} differencing needs {order} raw values, got {tail.size}"
        )
    # lasts[k] = most recent value of the k-times differenced history
    lasts = []
    level = tail
    for _ in range(order):
        lasts.append(level[-1])
        level = np.diff(level)
    forecast = float(diff_forecast)
    for k in range(order - 1, -1, -1):
        forecast = lasts[k] + forecast
    return forecast


def train_test_split(s, train_fraction: float, min_train: int = 10):
    """Chronological split: the first ``floor(fraction * n)`` points train."""
    s = as_series(s)
    if not (0.0 < train_fraction < 1.0):
        raise InvalidArgumentError(f"train fraction must lie in (0, 1), got {train_fraction}")
    n = len(s)
    # the epsilon keeps e.g. 0.29 * 100 from flooring to 28
    n_train = int(math.floor(train_fraction * n + 1e-9))
    if n_train < min_train:
        raise InvalidArgumentError(
            f"training part has {n_train} points, at least {min_train} required"
        )
    if n_train >= n:
        raise InvalidArgumentError("split leaves no test points")
    return s.slice(0, n_train), s.slice(n_train)


@dataclass(frozen=True)
class WindowMatrix:
    rows: np.ndarray
    targets: np.ndarray
    window_len: int


def build_windows(s, window_len: int) -> WindowMatrix:
    """Overlapping windows: row i is s[i:i+L], its target s[i+L]."""
    values = as_series(s).values
    if window_len < 1:
        raise InvalidArgumentError(f"window length must be >= 1, got {window_len}")
    if values.size < window_len + 1:
        raise InvalidArgumentError(
            f"window length {window_len} needs at least {window_len + 1} values, "
            f"got {values.size}"
        )
    rows = np.lib.stride_tricks.sliding_window_view(values, window_len)[:-1].copy()
    targets = values[window_len:].copy()
    return WindowMatrix(rows, targets, window_len)


def is_constant(values: np.ndarray, rtol: float = 1e-10) -> bool:
    """True when the spread of ``values`` is negligible against their magnitude."""
    values = np.asarray(values, dtype=float)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if scale == 0.0:
        return True
    return float(np.ptp(values)) <= rtol * scale


def sample_autocorrelation(s, max_lag: int) -> np.ndarray:
    """Biased autocorrelations r_0..r_max_lag (denominator n for every lag)."""
    x = as_series(s).values
    n = x.size
    if max_lag < 0:
        raise InvalidArgumentError(f"max_lag must be >= 0, got {max_lag}")
    if n <= max_lag:
        raise InvalidArgumentError(f"lag {max_lag} needs more than {max_lag} values, got {n}")
    if is_constant(x):
        raise DegenerateInputError("autocorrelation of a constant series is undefined")
    xc = x - x.mean()
    denom = float(np.dot(xc, xc))
    acf = np.empty(max_lag + 1)
    acf[0] = 1.0
    for k in range(1, max_lag + 1):
        acf[k] = float(np.dot(xc[:-k], xc[k:])) / denom
    return acf
