"""Text, delimited and figure output for fit/validate reports.

Figures go through matplotlib's Agg backend with fixed rcParams and no
timestamp metadata, so rerunning a command rewrites identical bytes.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .dataset_io import atomic_write  # noqa: E402
from .regression import CoefficientVector, FitMetrics  # noqa: E402

FIGURE_STYLE = {
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "svg.hashsalt": "stlf",
}

# strip version/date metadata so figure bytes depend only on the data
SAVE_METADATA = {"png": {"Software": None}, "svg": {"Date": None}, "pdf": {"CreationDate": None}}


def fmt(value: Optional[float], unit: str = "") -> str:
    """4-decimal display; undefined metrics print as ``undefined``."""
    if value is None:
        return "undefined"
    return f"{value:.4f}{unit}"


def metrics_lines(metrics: FitMetrics, mape_threshold: Optional[float] = None) -> List[str]:
    lines = [
        f"MaxErr = {fmt(metrics.max_abs_deviation)}",
        f"MAPE = {fmt(metrics.mape_percent, ' %')}",
        f"R^2 = {fmt(metrics.r_squared)}",
    ]
    if mape_threshold is not None:
        if metrics.mape_percent is None:
            verdict = "cannot be checked (MAPE undefined)"
        elif metrics.mape_percent < mape_threshold:
            verdict = "met"
        else:
            verdict = "EXCEEDED"
        lines.append(f"MAPE claim threshold = {mape_threshold:.4f} % ... {verdict}")
    return lines


def coefficient_lines(coef: CoefficientVector, names: Sequence[str]) -> List[str]:
    width = max(len(n) for n in ("intercept", *names))
    out = [f"{'intercept'.ljust(width)}  {coef.intercept: .6f}"]
    out += [f"{name.ljust(width)}  {c: .6f}" for name, c in zip(names, coef.coefficients)]
    return out


def predictions_csv(labels: Sequence[str], actual: Sequence[float], predicted: Sequence[float]) -> str:
    rows = ["target_hour,actual_mw,predicted_mw,error_mw"]
    for lab, a, p in zip(labels, actual, predicted):
        rows.append(f"{lab},{a:.4f},{p:.4f},{p - a:.4f}")
    return "\n".join(rows) + "\n"


def _save(fig, path: Path) -> None:
    buf = io.BytesIO()
    kind = path.suffix.lstrip(".").lower() or "png"
    fig.savefig(buf, format=kind, metadata=SAVE_METADATA.get(kind), bbox_inches="tight")
    plt.close(fig)
    atomic_write(path, buf.getvalue())


def plot_actual_vs_predicted(
    actual: Sequence[float],
    predicted: Sequence[float],
    path,
    *,
    title: str = "Actual and predicted load at coming hour",
) -> None:
    """Sequence panel plus parity panel (predicted against actual)."""
    with plt.rc_context(FIGURE_STYLE):
        fig, (ax_seq, ax_par) = plt.subplots(1, 2, figsize=(8.0, 3.2))
        idx = range(1, len(actual) + 1)
        ax_seq.plot(idx, actual, "o-", label="actual", color="black", ms=3)
        ax_seq.plot(idx, predicted, "s--", label="predicted", color="tab:red", ms=3)
        ax_seq.set_xlabel("Hour")
        ax_seq.set_ylabel("Load (MW)")
        ax_seq.legend(frameon=False)

        lo = min(min(actual), min(predicted))
        hi = max(max(actual), max(predicted))
        ax_par.plot([lo, hi], [lo, hi], color="grey", lw=0.8)
        ax_par.scatter(actual, predicted, s=12, color="tab:blue")
        ax_par.set_xlabel("Actual (MW)")
        ax_par.set_ylabel("Predicted (MW)")
        ax_par.set_aspect("equal", adjustable="datalim")
        fig.suptitle(title)
        _save(fig, Path(path))


def plot_demand_scatter(
    temperature: Sequence[float],
    demand: Sequence[float],
    trend: CoefficientVector,
    path,
) -> None:
    with plt.rc_context(FIGURE_STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.4))
        ax.scatter(temperature, demand, s=12, color="tab:blue", label="observed")
        lo, hi = min(temperature), max(temperature)
        b1, b2 = trend.intercept, trend.coefficients[0]
        ax.plot([lo, hi], [b1 + b2 * lo, b1 + b2 * hi], color="tab:red",
                label=f"D = {b1:.4f} + {b2:.4f} T")
        ax.set_xlabel("Temperature (°C)")
        ax.set_ylabel("Demand (MW)")
        ax.set_title("Temperature vs next-hour demand")
        ax.legend(frameon=False)
        _save(fig, Path(path))


def write_report(
    directory,
    labels: Sequence[str],
    actual: Sequence[float],
    predicted: Sequence[float],
    *,
    stem: str,
    title: Optional[str] = None,
) -> List[Path]:
    """Write ``<stem>.csv`` and ``<stem>.png`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    csv_path = directory / f"{stem}.csv"
    png_path = directory / f"{stem}.png"
    atomic_write(csv_path, predictions_csv(labels, actual, predicted))
    kwargs = {"title": title} if title else {}
    plot_actual_vs_predicted(actual, predicted, png_path, **kwargs)
    return [csv_path, png_path]
