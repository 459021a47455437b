"""Dataset ingestion and the three-way ARIMA / PC / hybrid benchmark."""

from __future__ import annotations

import csv
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .arima import ArimaOrder, auto_order, fit_arima, rolling_forecast
from .errors import ForecastError, InvalidArgumentError
from .hybrid import OMEGA_MODES, VALIDATION_TAIL, combine, fit_hybrid
from .metrics import MetricsReport, evaluate
from .plot import emit_plot
from .polycls import fit_pc, rolling_forecast_pc, select_pc_config
from .series import TimeSeries, train_test_split

log = logging.getLogger(__name__)

MIN_ROWS = 10
SYNTH_KINDS = ("ar1", "trend-sine", "random-walk", "quadratic")
MODEL_NAMES = ("ARIMA", "PC", "Hybrid")

DATASET_HELP = """\
Datasets used in the original comparison (not bundled; download them yourself):

  Delhi daily climate, 2013-01-01 .. 2017-04-24   (Kaggle)
      e.g. --column meantemp  --label date
  Daily gold price, 2013 .. 2023                  (investing.com commodities)
      e.g. --column Price     --label Date
  Daily crude oil price, 2007-01-02 .. 2023-12-05 (investing.com commodities)
      e.g. --column Price     --label Date
  Monthly Australian beer production, 1956 .. 1995 (Kaggle)
      e.g. --column "Monthly beer production"  --label Month

Sources: https://www.kaggle.com/datasets/ and https://vn.investing.com/commodities
Column names depend on the download; check the header row. Any CSV with a
header works; --column takes a column name or a zero-based
index. Thousands separators such as "1,234.5" are accepted in numeric fields.
"""


# --------------------------------------------------------------------- input

@dataclass(frozen=True)
class CsvLoad:
    series: TimeSeries
    skipped: Tuple[int, ...]  # 1-based file line numbers of rejected rows


def _resolve_column(header: List[str], column, what: str) -> int:
    names = [h.strip() for h in header]
    if isinstance(column, int):
        idx = column
    elif str(column).strip() in names:
        return names.index(str(column).strip())
    elif str(column).strip().isdigit():
        idx = int(str(column).strip())
    else:
        raise InvalidArgumentError(f"{what} column {column!r} not found; header is {names}")
    if not 0 <= idx < len(names):
        raise InvalidArgumentError(f"{what} column index {idx} out of range for {len(names)} columns")
    return idx


def parse_number(text: str) -> float:
    """Parse a real, tolerating comma thousands separators and surrounding space."""
    value = float(text.strip().replace(",", ""))
    if not np.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def read_csv_series(path, value_column, label_column=None) -> CsvLoad:
    """Read one numeric column of a headed CSV file in file order.

    Rows whose value does not parse are skipped and their line numbers
    reported. Fewer than 10 usable rows is an error.
    """
    if not os.path.isfile(path):
        raise InvalidArgumentError(f"data file not found: {path}")
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidArgumentError(f"{path}: empty file, a header row is required") from None
        vcol = _resolve_column(header, value_column, "value")
        lcol = None if label_column is None else _resolve_column(header, label_column, "label")
        values, labels, skipped = [], [], []
        for row in reader:
            line = reader.line_num
            try:
                values.append(parse_number(row[vcol]))
            except (IndexError, ValueError):
                skipped.append(line)
                continue
            if lcol is not None:
                labels.append(row[lcol] if lcol < len(row) else "")
    if skipped:
        log.warning("%s: skipped %d unparseable row(s), first at line %d",
                    path, len(skipped), skipped[0])
    if len(values) < MIN_ROWS:
        where = f"; rejected lines: {skipped[:10]}" if skipped else ""
        raise InvalidArgumentError(
            f"{path}: only {len(values)} parseable values in column {header[vcol].strip()!r}, "
            f"at least {MIN_ROWS} required{where}"
        )
    name = header[vcol].strip() or os.path.basename(str(path))
    series = TimeSeries(np.array(values), tuple(labels) if lcol is not None else None, name)
    return CsvLoad(series, tuple(skipped))


def load_csv(path, value_column, label_column=None) -> TimeSeries:
    return read_csv_series(path, value_column, label_column).series


# ----------------------------------------------------------------- synthetic

def synth_dataset(kind: str, n: int, seed: int = 42) -> TimeSeries:
    """Deterministic stand-in series.

    ar1          20 + AR(1) with phi=0.7, unit Gaussian shocks, 200-step burn-in
    trend-sine   50 + 0.05 i + 5 sin(2 pi i / 12) + N(0, 1)
    random-walk  100 + cumulative sum of N(0, 1)
    quadratic    10 + 0.01 i^2 + N(0, 1)
    """
    if kind not in SYNTH_KINDS:
        raise InvalidArgumentError(f"unknown synthetic kind {kind!r}; choose from {SYNTH_KINDS}")
    if n < 50:
        raise InvalidArgumentError(f"synthetic series need n >= 50, got {n}")
    rng = np.random.default_rng(seed)
    i = np.arange(n, dtype=float)
    if kind == "ar1":
        burn = 200
        e = rng.standard_normal(n + burn)
        x = np.zeros(n + burn)
        for t in range(1, n + burn):
            x[t] = 0.7 * x[t - 1] + e[t]
        values = 20.0 + x[burn:]
    elif kind == "trend-sine":
        values = 50.0 + 0.05 * i + 5.0 * np.sin(2 * np.pi * i / 12) + rng.standard_normal(n)
    elif kind == "random-walk":
        values = 100.0 + np.cumsum(rng.standard_normal(n))
    else:
        values = 10.0 + 0.01 * i * i + rng.standard_normal(n)
    return TimeSeries(values, None, f"{kind}-n{n}-s{seed}")


# ---------------------------------------------------------------- experiment

@dataclass
class ExperimentConfig:
    dataset_path: Optional[str] = None
    value_column: Union[str, int] = 0
    label_column: Union[str, int, None] = None
    train_fraction: float = 0.8
    arima: Union[str, ArimaOrder] = "auto"
    pc: Union[str, Tuple[int, int]] = "auto"
    omega_mode: str = VALIDATION_TAIL
    seed: int = 42
    output_dir: Optional[str] = None
    scale_inputs: bool = False
    omega: Optional[float] = None  # fixed weight; None estimates it
    synth_kind: Optional[str] = None
    synth_n: int = 2000

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise InvalidArgumentError(f"train fraction must lie in (0, 1), got {self.train_fraction}")
        if self.omega_mode not in OMEGA_MODES:
            raise InvalidArgumentError(f"omega mode must be one of {OMEGA_MODES}")
        if isinstance(self.arima, str) and self.arima != "auto":
            self.arima = ArimaOrder.parse(self.arima)
        if isinstance(self.pc, str) and self.pc != "auto":
            try:
                L, K = (int(x) for x in self.pc.split(","))
            except ValueError:
                raise InvalidArgumentError(f"expected 'L,K' for the PC configuration, got {self.pc!r}") from None
            self.pc = (L, K)
        if isinstance(self.pc, tuple):
            L, K = self.pc
            if L < 1 or not 1 <= K <= 3:
                raise InvalidArgumentError(f"PC needs L >= 1 and K in 1..3, got {self.pc}")
        if self.omega is not None and not 0.0 <= self.omega <= 1.0:
            raise InvalidArgumentError(f"omega must lie in [0, 1], got {self.omega}")
        if self.seed < 0:
            raise InvalidArgumentError("seed must be non-negative")
        if self.dataset_path is None and self.synth_kind is None:
            raise InvalidArgumentError("either a data file or a synthetic kind is required")


def load_series(config: ExperimentConfig) -> TimeSeries:
    if config.dataset_path is not None:
        return load_csv(config.dataset_path, config.value_column, config.label_column)
    return synth_dataset(config.synth_kind, config.synth_n, config.seed)


@dataclass
class ModelRow:
    model: str
    report: Optional[MetricsReport] = None
    params: Dict[str, str] = field(default_factory=dict)
    error: Optional[str] = None
    forecast: Optional[np.ndarray] = None


@dataclass
class ComparisonTable:
    dataset: str
    n_train: int
    n_test: int
    rows: List[ModelRow]
    observed: np.ndarray
    test_offset: int
    omega: Optional[float] = None

    def row(self, model: str) -> ModelRow:
        for r in self.rows:
            if r.model == model:
                return r
        raise KeyError(model)


class _Scaler:
    """Min-max map fitted on the training part; identity when disabled."""

    def __init__(self, train_values, enabled):
        self.lo = float(np.min(train_values)) if enabled else 0.0
        span = float(np.ptp(train_values)) if enabled else 1.0
        self.span = span if span > 0 else 1.0

    def forward(self, v):
        return (np.asarray(v, dtype=float) - self.lo) / self.span

    def inverse(self, v):
        return np.asarray(v, dtype=float) * self.span + self.lo


def _prepare(config: ExperimentConfig, series: Optional[TimeSeries]):
    series = series if series is not None else load_series(config)
    train, test = train_test_split(series, config.train_fraction)
    scaler = _Scaler(train.values, config.scale_inputs)
    s_train = TimeSeries(scaler.forward(train.values), None, train.name)
    s_test = TimeSeries(scaler.forward(test.values), None, test.name)
    return series, train, test, s_train, s_test, scaler


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def run_compare(config: ExperimentConfig, series: Optional[TimeSeries] = None,
                write: bool = True) -> ComparisonTable:
    """Fit ARIMA, PC and the hybrid on the training part and score rolling
    one-step forecasts over the test part.

    Each row's wall time covers its own configuration search, fit and
    forecast; the hybrid's includes both component searches. A model that
    fails produces an error row.
    """
    series, train, test, s_train, s_test, scaler = _prepare(config, series)
    obs = test.values
    rows = {}

    def arima_job():
        if config.arima == "auto":
            order, model = auto_order(s_train)
        else:
            order = config.arima
            model = fit_arima(s_train, order)
        return order, model, rolling_forecast(model, s_train, s_test)

    def pc_job():
        L, K = select_pc_config(s_train) if config.pc == "auto" else config.pc
        model = fit_pc(s_train, L, K)
        return (L, K), model, rolling_forecast_pc(model, s_train, s_test)

    results = {}
    for name, job in (("ARIMA", arima_job), ("PC", pc_job)):
        try:
            out, secs = _timed(job)
        except ForecastError as exc:
            log.error("%s failed: %s", name, exc)
            rows[name] = ModelRow(name, error=str(exc))
            continue
        cfg, model, fc_scaled = out
        fc = scaler.inverse(fc_scaled)
        results[name] = (cfg, model, fc_scaled, secs)
        params = ({"order": str(cfg)} if name == "ARIMA" else {"L": str(cfg[0]), "K": str(cfg[1])})
        rows[name] = ModelRow(name, evaluate(obs, fc, secs), params, None, fc)

    omega = None
    if "ARIMA" in results and "PC" in results:
        order, _, a_scaled, a_secs = results["ARIMA"]
        pc_cfg, _, p_scaled, p_secs = results["PC"]
        try:
            t0 = time.perf_counter()
            hyb = fit_hybrid(s_train, order, pc_cfg, config.omega_mode, omega=config.omega)
            # refit components equal the standalone ones, so their forecasts are reused
            fc = scaler.inverse(combine(a_scaled, p_scaled, hyb.omega))
            # charged with both component runs, whose searches and forecasts it reuses
            secs = time.perf_counter() - t0 + a_secs + p_secs
            omega = hyb.omega
            params = {"order": str(order), "L": str(pc_cfg[0]), "K": str(pc_cfg[1]),
                      "omega": f"{hyb.omega:.4f}", "omega_unclipped": f"{hyb.omega_unclipped:.4f}"}
            rows["Hybrid"] = ModelRow("Hybrid", evaluate(obs, fc, secs), params, None, fc)
        except ForecastError as exc:
            log.error("Hybrid failed: %s", exc)
            rows["Hybrid"] = ModelRow("Hybrid", error=str(exc))
    else:
        failed = [m for m in ("ARIMA", "PC") if m not in results]
        rows["Hybrid"] = ModelRow("Hybrid", error=f"component failure: {', '.join(failed)}")

    table = ComparisonTable(series.name, len(train), len(test), [rows[m] for m in MODEL_NAMES],
                            obs, len(train), omega)
    if write and config.output_dir:
        write_outputs(table, config.output_dir)
    return table


# ---------------------------------------------------------------- degree sweep

@dataclass
class SweepRow:
    degree: int
    report: Optional[MetricsReport] = None
    error: Optional[str] = None


@dataclass
class DegreeSweep:
    dataset: str
    window_len: int
    rows: List[SweepRow]


def run_degree_sweep(config: ExperimentConfig, series: Optional[TimeSeries] = None,
                     degrees=(1, 2, 3), write: bool = True) -> DegreeSweep:
    """Test metrics of the PC for each degree at a fixed window length."""
    series, train, test, s_train, s_test, scaler = _prepare(config, series)
    if config.pc == "auto":
        L, _ = select_pc_config(s_train)
    else:
        L = config.pc[0]
    rows = []
    for K in degrees:
        try:
            model, secs = _timed(lambda: fit_pc(s_train, L, K))
            fc = scaler.inverse(rolling_forecast_pc(model, s_train, s_test))
            rows.append(SweepRow(K, evaluate(test.values, fc, secs)))
        except ForecastError as exc:
            rows.append(SweepRow(K, None, str(exc)))
    sweep = DegreeSweep(series.name, L, rows)
    if write and config.output_dir:
        os.makedirs(config.output_dir, exist_ok=True)
        with open(os.path.join(config.output_dir, "degree_sweep.csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["Degree", "MAE", "RMSE", "CV(RMSE)%", "error"])
            for r in rows:
                if r.report is None:
                    w.writerow([r.degree, "", "", "", r.error])
                else:
                    w.writerow([r.degree, f"{r.report.mae:.4f}", f"{r.report.rmse:.4f}",
                                f"{r.report.cv_rmse_percent:.4f}", ""])
    return sweep


def format_sweep(sweep: DegreeSweep) -> str:
    lines = [f"Dataset: {sweep.dataset}  (window length L={sweep.window_len})",
             f"{'Degree':>6}  {'MAE':>12}  {'RMSE':>12}  {'CV(RMSE)%':>10}"]
    for r in sweep.rows:
        if r.report is None:
            lines.append(f"{r.degree:>6}  error: {r.error}")
        else:
            lines.append(f"{r.degree:>6}  {r.report.mae:>12.4f}  {r.report.rmse:>12.4f}  "
                         f"{r.report.cv_rmse_percent:>10.4f}")
    return "\n".join(lines)


# ------------------------------------------------------------------- output

def format_table(table: ComparisonTable) -> str:
    """Aligned plain-text rendering with four decimals, published column order."""
    head = f"{'Model':<8}" + "".join(f"{c:>14}" for c in MetricsReport.COLUMNS) + "  Config"
    lines = [f"Dataset: {table.dataset}  (train {table.n_train}, test {table.n_test})", head]
    for r in table.rows:
        cfg = " ".join(f"{k}={v}" for k, v in r.params.items())
        if r.report is None:
            lines.append(f"{r.model:<8}  error: {r.error}")
        else:
            lines.append(f"{r.model:<8}" + "".join(f"{v:>14.4f}" for v in r.report.row()) + f"  {cfg}")
    return "\n".join(lines)


def _num(v) -> str:
    return format(float(v), ".17g")


def write_outputs(table: ComparisonTable, output_dir: str) -> Dict[str, str]:
    os.makedirs(output_dir, exist_ok=True)
    paths = {
        "table": os.path.join(output_dir, "comparison.csv"),
        "forecasts": os.path.join(output_dir, "forecasts.csv"),
        "plot": os.path.join(output_dir, "forecasts.svg"),
    }
    with open(paths["table"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Model", *MetricsReport.COLUMNS, "config", "error"])
        for r in table.rows:
            cfg = " ".join(f"{k}={v}" for k, v in r.params.items())
            if r.report is None:
                w.writerow([r.model, "", "", "", "", cfg, r.error])
            else:
                w.writerow([r.model, *(f"{v:.4f}" for v in r.report.row()), cfg, ""])
    forecasts = {r.model: r.forecast for r in table.rows if r.forecast is not None}
    with open(paths["forecasts"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "observed", "arima", "pc", "hybrid"])
        for k, y in enumerate(table.observed):
            cells = [str(table.test_offset + k), _num(y)]
            for m in MODEL_NAMES:
                fc = forecasts.get(m)
                cells.append("" if fc is None else _num(fc[k]))
            w.writerow(cells)
    emit_plot(table.observed, forecasts, paths["plot"],
              title=f"{table.dataset}: one-step forecasts over the test set",
              x_offset=table.test_offset)
    return paths
