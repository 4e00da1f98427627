"""Serialization of tear sheets and plot-ready CSV datasets.

This package emits plot *data*, not rendered charts; any plotting tool
can consume the files.  All output is deterministic: fixed column order
(sorted tickers), fixed decimal formatting (shortest representation
capped at 12 significant digits), LF line endings.  The same inputs
always produce byte-identical files.

Output schemas:

* tear sheets, CSV  — ``metric,<window...>`` header, one row per metric,
  not-computable cells left empty;
* tear sheets, JSON — ``[{"window": str, "metrics": {name: number|null}}]``;
* shares / weights  — ``date,<ticker...>``, one row per trading day;
* cumulative        — ``date,portfolio_cum,benchmark_cum,segment`` where
  segment flips from in_sample to out_of_sample at the split date;
* distributions     — ``frequency,stat,value`` five-number summaries of
  daily, weekly, monthly, and annual returns.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .metrics import METRIC_NAMES, TearSheet, box_plot_summary
from .portfolio import BacktestResult
from .returns import aggregate, simple_returns

logger = logging.getLogger(__name__)

PLOT_KINDS = ("shares", "weights", "cumulative", "distributions")
BOX_STATS = ("min", "q1", "median", "q3", "max")


@dataclass(frozen=True)
class ReportBundle:
    """Everything one backtest run produced on disk."""

    tear_sheets: tuple[tuple[str, TearSheet], ...]
    series_files: dict[str, Path]

    def __post_init__(self):
        labels = [label for label, _ in self.tear_sheets]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate window labels: {labels}")


def format_number(x: float) -> str:
    """Shortest decimal form capped at 12 significant digits."""
    if x == 0.0:
        return "0"
    return format(float(x), ".12g")


def export_tear_sheets(sheets, path, format: str = "csv") -> Path:
    """Write tear sheets to one file, windows side by side.

    ``sheets`` is a sequence of TearSheet whose window_label fields name
    the columns.  Not-computable metrics become empty CSV cells or JSON
    nulls.
    """
    sheets = list(sheets)
    path = Path(path)
    if format == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["metric"] + [s.window_label for s in sheets])
            for name in METRIC_NAMES:
                row = [name]
                for sheet in sheets:
                    v = getattr(sheet, name)
                    row.append("" if v is None else format_number(v))
                writer.writerow(row)
    elif format == "json":
        payload = [
            {"window": s.window_label, "metrics": {n: getattr(s, n) for n in METRIC_NAMES}}
            for s in sheets
        ]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        raise ValidationError(f"unknown tear-sheet format {format!r}")
    logger.debug("wrote %d tear sheets to %s (%s)", len(sheets), path, format)
    return path


def read_tear_sheets(path, format: str = "csv") -> list[TearSheet]:
    """Parse a tear-sheet file back into TearSheet objects."""
    path = Path(path)
    if format == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0][:1] != ["metric"]:
            raise ParseError("bad tear-sheet header", path, 1)
        labels = rows[0][1:]
        table: dict[str, list[float | None]] = {}
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != len(labels) + 1:
                raise ParseError(f"expected {len(labels) + 1} columns", path, lineno)
            table[row[0]] = [float(c) if c != "" else None for c in row[1:]]
        missing = [n for n in METRIC_NAMES if n not in table]
        if missing:
            raise ParseError(f"missing metric rows: {missing}", path)
        return [
            TearSheet(**{n: table[n][i] for n in METRIC_NAMES}, window_label=label)
            for i, label in enumerate(labels)
        ]
    if format == "json":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        return [
            TearSheet(**{n: entry["metrics"][n] for n in METRIC_NAMES},
                      window_label=entry["window"])
            for entry in payload
        ]
    raise ValidationError(f"unknown tear-sheet format {format!r}")


def _write_wide_csv(path: Path, header: list[str], dates, columns) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, day in enumerate(dates):
            writer.writerow([day.isoformat()] + [col(i) for col in columns])


def emit_plot_data(
    result: BacktestResult,
    benchmark_cum: np.ndarray,
    split_date: date,
    out_dir,
) -> dict[str, Path]:
    """Write the four per-portfolio plot datasets and return the manifest.

    ``benchmark_cum`` must be the benchmark's cumulative return aligned to
    ``result.calendar`` (0.0 on the first day).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    benchmark_cum = np.asarray(benchmark_cum, dtype=np.float64)
    if len(benchmark_cum) != len(result.calendar):
        raise ValidationError(
            f"benchmark series length {len(benchmark_cum)} != calendar length "
            f"{len(result.calendar)}"
        )
    tickers = list(result.tickers)
    manifest: dict[str, Path] = {}

    path = out_dir / "shares.csv"
    _write_wide_csv(
        path, ["date"] + tickers, result.calendar,
        [lambda i, t=t: str(int(result.shares[t][i])) for t in tickers],
    )
    manifest["shares"] = path

    path = out_dir / "weights.csv"
    _write_wide_csv(
        path, ["date"] + tickers, result.calendar,
        [lambda i, t=t: format_number(result.weights[t][i]) for t in tickers],
    )
    manifest["weights"] = path

    portfolio_cum = result.value / result.value[0] - 1.0
    path = out_dir / "cumulative.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "portfolio_cum", "benchmark_cum", "segment"])
        for i, day in enumerate(result.calendar):
            segment = "in_sample" if day < split_date else "out_of_sample"
            writer.writerow(
                [day.isoformat(), format_number(portfolio_cum[i]),
                 format_number(benchmark_cum[i]), segment]
            )
    manifest["cumulative"] = path

    daily = simple_returns(result.calendar, result.value)
    path = out_dir / "distributions.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["frequency", "stat", "value"])
        for frequency in ("daily", "weekly", "monthly", "annual"):
            series = daily if frequency == "daily" else aggregate(daily, frequency)
            for stat, value in zip(BOX_STATS, box_plot_summary(series)):
                writer.writerow([frequency, stat, format_number(value)])
    manifest["distributions"] = path

    logger.debug("emitted plot data for %d days into %s", len(result.calendar), out_dir)
    return manifest
