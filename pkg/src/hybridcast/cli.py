"""Command-line entry point.

Subcommands::

    compare       ARIMA vs PC vs hybrid on one series (table, CSVs, SVG)
    sweep-degree  PC test accuracy for degrees 1..3 at a fixed window length
    fit           fit the hybrid on the training part and print its parameters
    forecast      write rolling one-step forecasts and the plot, no table
    synth         write a synthetic series to CSV
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from . import __version__
from .bench import (
    DATASET_HELP,
    SYNTH_KINDS,
    ExperimentConfig,
    format_sweep,
    format_table,
    load_series,
    run_compare,
    run_degree_sweep,
    synth_dataset,
    write_outputs,
)
from .errors import ForecastError
from .hybrid import OMEGA_MODES, VALIDATION_TAIL, fit_hybrid
from .series import train_test_split

log = logging.getLogger("hybridcast")


class StageError(Exception):
    def __init__(self, stage, exc):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage


def _add_data_args(p: argparse.ArgumentParser, with_models=True):
    src = p.add_argument_group("input")
    src.add_argument("--data", help="CSV file with a header row")
    src.add_argument("--column", default="0", help="value column name or zero-based index (default 0)")
    src.add_argument("--label", default=None, help="optional time-label column")
    src.add_argument("--synth", choices=SYNTH_KINDS, help="use a synthetic series instead of --data")
    src.add_argument("--n", type=int, default=2000, help="length of the synthetic series (default 2000)")
    p.add_argument("--split", type=float, default=0.8, help="training fraction (default 0.8)")
    p.add_argument("--seed", type=int, default=42, help="seed for synthetic data (default 42)")
    p.add_argument("--out", default=None, help="output directory for CSV and SVG files")
    p.add_argument("--scale-inputs", action="store_true",
                   help="min-max scale the series (training range) before fitting")
    if with_models:
        p.add_argument("--arima", default="auto", help="'auto' or an explicit order p,d,q")
        p.add_argument("--pc", default="auto", help="'auto' or an explicit window,degree L,K")
        p.add_argument("--omega-mode", choices=OMEGA_MODES, default=VALIDATION_TAIL)
        p.add_argument("--omega", type=float, default=None, help="fix the combination weight in [0, 1]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridcast",
        description="ARIMA, polynomial classifier and their parallel hybrid.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--dataset-help", action="store_true",
                        help="describe the reference datasets and their columns, then exit")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("compare", help="three-way comparison table")
    _add_data_args(p)
    p = sub.add_parser("sweep-degree", help="PC degree 1..3 sweep")
    _add_data_args(p, with_models=False)
    p.add_argument("--pc", default="auto", help="'auto' or L,K (only L is used)")
    p = sub.add_parser("fit", help="fit the hybrid and print its parameters as JSON")
    _add_data_args(p)
    p = sub.add_parser("forecast", help="write forecasts CSV and SVG")
    _add_data_args(p)

    p = sub.add_parser("synth", help="write a synthetic series to CSV")
    p.add_argument("--kind", choices=SYNTH_KINDS, required=True)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="output CSV path")
    return parser


def _config(args) -> ExperimentConfig:
    column = int(args.column) if args.column.isdigit() else args.column
    label = args.label
    if label is not None and label.isdigit():
        label = int(label)
    return ExperimentConfig(
        dataset_path=args.data,
        value_column=column,
        label_column=label,
        train_fraction=args.split,
        arima=getattr(args, "arima", "auto"),
        pc=getattr(args, "pc", "auto"),
        omega_mode=getattr(args, "omega_mode", VALIDATION_TAIL),
        seed=args.seed,
        output_dir=args.out,
        scale_inputs=args.scale_inputs,
        omega=getattr(args, "omega", None),
        synth_kind=args.synth,
        synth_n=args.n,
    )


def _stage(name, fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except (ForecastError, OSError, ValueError) as exc:
        raise StageError(name, exc) from exc


def _cmd_compare(args):
    config = _stage("config", _config, args)
    series = _stage("load", load_series, config)
    table = _stage("compare", run_compare, config, series, write=False)
    if config.output_dir:
        _stage("write", write_outputs, table, config.output_dir)
    print(format_table(table))
    failed = [r.model for r in table.rows if r.error]
    return 1 if failed else 0


def _cmd_sweep(args):
    config = _stage("config", _config, args)
    series = _stage("load", load_series, config)
    sweep = _stage("sweep", run_degree_sweep, config, series)
    print(format_sweep(sweep))
    return 0


def _cmd_fit(args):
    config = _stage("config", _config, args)
    series = _stage("load", load_series, config)
    train, _ = _stage("split", train_test_split, series, config.train_fraction)
    model = _stage("fit", fit_hybrid, train, config.arima, config.pc, config.omega_mode,
                   omega=config.omega)
    a, pc = model.arima, model.pc
    summary = {
        "dataset": series.name,
        "n_train": len(train),
        "arima": {
            "order": [a.order.p, a.order.d, a.order.q],
            "phi": a.phi.tolist(),
            "theta": a.theta.tolist(),
            "intercept": a.intercept,
            "sigma2": a.sigma2,
            "aic": a.aic,
            "converged": a.converged,
        },
        "pc": {
            "window_len": pc.window_len,
            "degree": pc.degree,
            "monomials": pc.basis.labels(),
            "weights": pc.weights.tolist(),
            "solve_method": pc.solve_report.method,
        },
        "omega": model.omega,
        "omega_unclipped": model.omega_unclipped,
        "omega_degenerate": model.degenerate,
        "omega_mode": model.omega_window.mode if model.omega_window else "fixed",
    }
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_forecast(args):
    config = _stage("config", _config, args)
    if not config.output_dir:
        raise StageError("config", "forecast needs --out")
    series = _stage("load", load_series, config)
    table = _stage("forecast", run_compare, config, series, write=False)
    paths = _stage("write", write_outputs, table, config.output_dir)
    print(paths["forecasts"])
    print(paths["plot"])
    return 1 if any(r.error for r in table.rows) else 0


def _cmd_synth(args):
    series = _stage("synth", synth_dataset, args.kind, args.n, args.seed)

    def write():
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "value"])
            for i, v in enumerate(series.values):
                w.writerow([i, format(float(v), ".17g")])

    _stage("write", write)
    print(args.out)
    return 0


COMMANDS = {
    "compare": _cmd_compare,
    "sweep-degree": _cmd_sweep,
    "fit": _cmd_fit,
    "forecast": _cmd_forecast,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.dataset_help:
        print(DATASET_HELP, end="")
        return 0
    if args.command is None:
        parser.print_help()
        return 2
    try:
        return COMMANDS[args.command](args)
    except StageError as exc:
        print(f"hybridcast: error in stage {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
