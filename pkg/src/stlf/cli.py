"""``stlf`` command line: fit, predict, validate, windows, plot.

Exit codes: 0 success, 1 data/model errors, 2 usage errors.  Option values
resolve as command-line flag, then ``--config`` JSON file, then built-in
default.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO

from . import __version__
from .dataset_io import (
    atomic_write,
    export_training_text,
    format_timestamp,
    read_model,
    read_series_csv,
    write_model,
)
from .errors import STLFError
from .features import FEATURE_SCHEMA, build_windows, temperature_demand_points
from .fixtures import load_fixture
from .forecaster import (
    DEFAULT_SPLIT,
    DEFAULT_WINDOW,
    check_schema,
    evaluate_pairs,
    fit_series,
    forecast_next,
    holdout,
    rolling_metrics,
    rolling_refit,
)
from .regression import build_design_matrix, compute_metrics, fit_ols, fit_simple, predict_many

SUBCOMMANDS = ("fit", "predict", "validate", "windows", "plot")
VALIDATE_FIXTURES = ("table2_actual_predicted", "section2_example")

DEFAULTS = {
    "split_fraction": DEFAULT_SPLIT,
    "window_size": None,
    "mape_threshold": 5.0,
    "workers": 1,
}


class UsageError(Exception):
    def __init__(self, message: str, usage: str = ""):
        super().__init__(message)
        self.usage = usage


class ConfigError(STLFError):
    pass


@dataclass
class CommandPlan:
    subcommand: str
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    options: Dict[str, object] = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="JSON", help="option defaults (flags still win)")

    parser = _Parser(prog="stlf", description="Next-hour load forecasting by 12-parameter regression.")
    parser.add_argument("--version", action="version", version=f"stlf {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")

    p = sub.add_parser("fit", parents=[common], help="fit the model on an hourly series")
    p.add_argument("--data", required=True, help="series CSV")
    p.add_argument("--model-out", required=True, help="model JSON to write")
    p.add_argument("--report-dir", help="also write in-sample predictions CSV and figure here")

    p = sub.add_parser("predict", parents=[common], help="forecast the hour after the series ends")
    p.add_argument("--model", required=True, help="model JSON")
    p.add_argument("--data", required=True, help="series CSV holding at least the last 3 hours")

    p = sub.add_parser("validate", parents=[common], help="score the method on data or a fixture")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="series CSV")
    src.add_argument("--fixture", choices=VALIDATE_FIXTURES, help="embedded reference table")
    p.add_argument("--model", help="score this model on every window of --data instead of refitting")
    p.add_argument("--split", type=float, dest="split_fraction", help="training fraction for hold-out")
    p.add_argument("--window", type=int, dest="window_size",
                   help=f"rolling refit over the last N pairs (e.g. {DEFAULT_WINDOW})")
    p.add_argument("--workers", type=int, help="threads for rolling refit")
    p.add_argument("--threshold", type=float, dest="mape_threshold", help="MAPE claim threshold in percent")
    p.add_argument("--report-dir", help="write predictions CSV and figure here")

    p = sub.add_parser("windows", parents=[common], help="export training pairs as text")
    p.add_argument("--data", required=True, help="series CSV")
    p.add_argument("--out", required=True, help="text file to write")

    p = sub.add_parser("plot", parents=[common], help="temperature vs next-hour demand with trend line")
    p.add_argument("--data", required=True, help="series CSV")
    p.add_argument("--out", required=True, help="SVG file to write")
    p.add_argument("--png", help="also render the figure with matplotlib")
    return parser


def _read_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    unknown = sorted(set(cfg) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"{path}: unknown config key(s): {', '.join(unknown)}")
    return cfg


def parse_args(argv: Optional[Sequence[str]] = None) -> CommandPlan:
    ns = _build_parser().parse_args(argv)
    cfg = _read_config(ns.config)
    args = vars(ns)

    plan = CommandPlan(ns.subcommand)
    for key in ("data", "model", "fixture"):
        if args.get(key):
            plan.inputs[key] = args[key]
    for key in ("model_out", "report_dir", "out", "png"):
        if args.get(key):
            plan.outputs[key] = args[key]
    for key, default in DEFAULTS.items():
        flag = args.get(key)
        plan.options[key] = flag if flag is not None else cfg.get(key, default)

    if plan.subcommand == "validate" and "model" in plan.inputs and "fixture" in plan.inputs:
        raise UsageError("--model needs --data, not --fixture")
    return plan


class _Run:
    """Holds stdout and names the file an error came from."""

    def __init__(self, plan: CommandPlan, out: TextIO):
        self.plan = plan
        self.out = out
        self.lines: List[str] = []

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def series(self, key: str = "data"):
        return self._sourced(key, read_series_csv)

    def model(self):
        return self._sourced("model", read_model)

    def _sourced(self, key, reader):
        path = self.plan.inputs[key]
        try:
            return reader(path)
        except STLFError as exc:
            exc.source = path
            raise

    def flush(self) -> None:
        self.out.write("".join(line + "\n" for line in self.lines))


def _cmd_fit(r: _Run) -> None:
    from .report import coefficient_lines, metrics_lines, write_report

    series = r.series()
    rep = fit_series(series)
    r.say(f"Fitted {len(FEATURE_SCHEMA)}-parameter model on {rep.n_pairs} training pairs "
          f"(last target hour {rep.model.trained_at})")
    r.say(f"Model id: {rep.model.model_id}")
    r.lines += coefficient_lines(rep.coefficients, FEATURE_SCHEMA)
    r.lines += metrics_lines(rep.metrics)
    write_model(rep.model, r.plan.outputs["model_out"])
    if "report_dir" in r.plan.outputs:
        pairs = build_windows(series)
        pred = predict_many(rep.coefficients, [p.features for p in pairs])
        write_report(r.plan.outputs["report_dir"], [format_timestamp(p.target_timestamp) for p in pairs],
                     [p.target for p in pairs], pred, stem="fit_in_sample",
                     title="In-sample fit")


def _cmd_predict(r: _Run) -> None:
    model = r.model()
    series = r.series()
    fc = forecast_next(model, series)
    r.say(f"Target hour: {format_timestamp(fc.target_hour)}")
    r.say(f"Model id: {fc.model_id}")
    r.say(f"Forecasted load (in MW) = {fc.predicted_load:.4f}")


def _cmd_validate(r: _Run) -> None:
    from .report import metrics_lines, write_report

    opts = r.plan.options
    threshold = float(opts["mape_threshold"])
    report_dir = r.plan.outputs.get("report_dir")
    fixture = r.plan.inputs.get("fixture")

    if fixture == "section2_example":
        fx = load_fixture(fixture)
        rows = fx["rows"]
        X = build_design_matrix([row[:2] for row in rows])
        y = [row[2] for row in rows]
        coef = fit_ols(X, y)
        metrics = compute_metrics(coef, X, y)
        r.say(f"Fixture {fixture}: {len(rows)} observations of (x1, x2, y)")
        r.say("a = " + " ".join(f"{v:.4f}" for v in coef.as_array()))
        r.lines += metrics_lines(metrics)
        if report_dir:
            pred = predict_many(coef, X)
            write_report(report_dir, [str(i + 1) for i in range(len(y))], y, pred, stem=fixture,
                         title="Two-variable example")
        return

    if fixture == "table2_actual_predicted":
        fx = load_fixture(fixture)
        actual = [a for a, _ in fx["pairs"]]
        predicted = [p for _, p in fx["pairs"]]
        metrics = evaluate_pairs(actual, predicted)
        r.say(f"Fixture {fixture}: {len(actual)} (actual, predicted) pairs")
        r.lines += metrics_lines(metrics, threshold)
        if report_dir:
            write_report(report_dir, [str(i + 1) for i in range(len(actual))], actual, predicted,
                         stem=fixture)
        return

    series = r.series()
    if "model" in r.plan.inputs:
        model = r.model()
        check_schema(model)
        pairs = build_windows(series)
        actual = [p.target for p in pairs]
        pred = predict_many(model.coefficient_vector, [p.features for p in pairs]).tolist()
        labels = [format_timestamp(p.target_timestamp) for p in pairs]
        metrics = evaluate_pairs(actual, pred)
        r.say(f"Model {model.model_id} scored on {len(pairs)} pairs")
        stem = "model_scored"
    elif opts["window_size"] is not None:
        steps = rolling_refit(series, int(opts["window_size"]), max_workers=int(opts["workers"]))
        actual = [s.actual for s in steps]
        pred = [s.forecast.predicted_load for s in steps]
        labels = [format_timestamp(s.forecast.target_hour) for s in steps]
        metrics = rolling_metrics(steps)
        r.say(f"Rolling refit: window {opts['window_size']} pairs, {len(steps)} one-hour-ahead forecasts")
        stem = "rolling"
    else:
        ev = holdout(series, float(opts["split_fraction"]))
        actual = [p.target for p in ev.test_pairs]
        pred = list(ev.predictions)
        labels = [format_timestamp(p.target_timestamp) for p in ev.test_pairs]
        metrics = ev.metrics
        r.say(f"Hold-out: trained on {ev.train.n_pairs} pairs, tested on {len(ev.test_pairs)} pairs")
        stem = "holdout"
    r.lines += metrics_lines(metrics, threshold)
    if report_dir:
        write_report(report_dir, labels, actual, pred, stem=stem)


def _cmd_windows(r: _Run) -> None:
    pairs = build_windows(r.series())
    export_training_text(pairs, r.plan.outputs["out"])
    r.say(f"Wrote {len(pairs)} training pairs ({len(FEATURE_SCHEMA)} features + target per line)")


def _cmd_plot(r: _Run) -> None:
    from .svgplot import render_scatter_svg

    temps, loads = temperature_demand_points(r.series())
    trend = fit_simple(temps, loads)
    svg = render_scatter_svg(temps, loads, trend)
    if "png" in r.plan.outputs:
        from .report import plot_demand_scatter

        plot_demand_scatter(temps, loads, trend, r.plan.outputs["png"])
    atomic_write(r.plan.outputs["out"], svg)
    r.say(f"{len(temps)} points; trend D = {trend.intercept:.4f} + {trend.coefficients[0]:.4f} T")


COMMANDS = {
    "fit": _cmd_fit,
    "predict": _cmd_predict,
    "validate": _cmd_validate,
    "windows": _cmd_windows,
    "plot": _cmd_plot,
}


def run(plan: CommandPlan, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    r = _Run(plan, stdout)
    try:
        COMMANDS[plan.subcommand](r)
    except (STLFError, ValueError) as exc:
        source = getattr(exc, "source", None)
        msg = f"{source}: {exc}" if source else str(exc)
        stderr.write(f"stlf {plan.subcommand}: error: {msg}\n")
        return 1
    r.flush()
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        plan = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(exc.usage)
        sys.stderr.write(f"stlf: error: {exc}\n")
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except STLFError as exc:
        sys.stderr.write(f"stlf: error: {exc}\n")
        return 1
    return run(plan)


if __name__ == "__main__":
    sys.exit(main())
