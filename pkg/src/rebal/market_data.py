"""Price-series ingestion, validation, and calendar alignment.

Price CSV schema (one file per ticker, or long format with several tickers
in one file):

    date,ticker,adj_close
    2021-01-04,TCS,2928.60

Dates are ISO-8601 calendar days (no timezone), prices are positive
decimals.  UTF-8, LF or CRLF line endings.

Sector manifest schema (JSON):

    {"sector": "auto", "tickers": ["MARUTI", ...], "benchmark": "INDEX50"}

Alignment policy is strict date intersection: a panel's calendar contains
exactly the days on which every constituent and the benchmark traded.  No
forward-filling or imputation is performed.

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import bisect
import csv
import json
import logging
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import AlignmentError, ParseError, ValidationError, WindowError

logger = logging.getLogger(__name__)

PRICE_CSV_HEADER = ("date", "ticker", "adj_close")


def _frozen(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Validated daily adjusted-close series for one ticker."""

    ticker: str
    dates: tuple[date, ...]
    prices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "prices", _frozen(self.prices))
        if len(self.dates) != len(self.prices):
            raise ValidationError(
                f"{self.ticker}: {len(self.dates)} dates vs {len(self.prices)} prices"
            )
        if len(self.dates) < 2:
            raise ValidationError(
                f"{self.ticker}: need at least 2 observations, got {len(self.dates)}"
            )
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise ValidationError(
                    f"{self.ticker}: dates not strictly increasing at {cur}"
                )
        if not np.all(np.isfinite(self.prices)) or np.any(self.prices <= 0.0):
            raise ValidationError(f"{self.ticker}: prices must be positive and finite")

    def __len__(self) -> int:
        return len(self.dates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return (
            self.ticker == other.ticker
            and self.dates == other.dates
            and np.array_equal(self.prices, other.prices)
        )


@dataclass(frozen=True)
class SectorManifest:
    """Names the constituents of one sector portfolio and its benchmark."""

    sector: str
    tickers: tuple[str, ...]
    benchmark: str

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        if not self.tickers:
            raise ValidationError(f"sector {self.sector!r}: empty ticker list")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValidationError(f"sector {self.sector!r}: duplicate tickers")
        if self.benchmark in self.tickers:
            raise ValidationError(
                f"sector {self.sector!r}: benchmark {self.benchmark!r} is also a constituent"
            )


@dataclass(frozen=True, eq=False)
class PricePanel:
    """Constituent prices plus a benchmark on one shared trading calendar.

    Ticker order is canonical (sorted), so two panels built from the same
    series in any input order compare equal field for field.
    """

    calendar: tuple[date, ...]
    tickers: tuple[str, ...]
    columns: dict[str, np.ndarray]
    benchmark: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "calendar", tuple(self.calendar))
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(
            self, "columns", {t: _frozen(v) for t, v in self.columns.items()}
        )
        object.__setattr__(self, "benchmark", _frozen(self.benchmark))
        n = len(self.calendar)
        if n < 2:
            raise ValidationError(f"panel calendar too short ({n} days)")
        for prev, cur in zip(self.calendar, self.calendar[1:]):
            if cur <= prev:
                raise ValidationError(f"panel calendar not strictly increasing at {cur}")
        if tuple(self.columns) != self.tickers:
            raise ValidationError("panel columns do not match ticker order")
        for ticker, col in self.columns.items():
            if len(col) != n:
                raise ValidationError(f"column {ticker!r} length {len(col)} != {n}")
            if not np.all(np.isfinite(col)) or np.any(col <= 0.0):
                raise ValidationError(f"column {ticker!r} has non-positive prices")
        if len(self.benchmark) != n:
            raise ValidationError("benchmark length does not match calendar")
        if not np.all(np.isfinite(self.benchmark)) or np.any(self.benchmark <= 0.0):
            raise ValidationError("benchmark has non-positive prices")

    def __len__(self) -> int:
        return len(self.calendar)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PricePanel):
            return NotImplemented
        return (
            self.calendar == other.calendar
            and self.tickers == other.tickers
            and all(np.array_equal(self.columns[t], other.columns[t]) for t in self.tickers)
            and np.array_equal(self.benchmark, other.benchmark)
        )

    def prices_at(self, idx: int) -> dict[str, float]:
        """Constituent prices on calendar day ``idx``, in ticker order."""
        return {t: float(self.columns[t][idx]) for t in self.tickers}


def load_price_series(path, ticker: str) -> PriceSeries:
    """Read one ticker's rows from a price CSV and validate them.

    The file may be per-ticker or long format; only rows whose ticker
    column matches are kept.  Rows may appear in any order; the result is
    sorted by date.
    """
    path = Path(path)
    rows: dict[date, float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file, expected header date,ticker,adj_close", path, 1)
        if tuple(h.strip() for h in header) != PRICE_CSV_HEADER:
            raise ParseError(
                f"bad header {header!r}, expected date,ticker,adj_close", path, 1
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 columns, got {len(row)}", path, lineno)
            raw_date, raw_ticker, raw_price = (c.strip() for c in row)
            if raw_ticker != ticker:
                continue
            try:
                day = date.fromisoformat(raw_date)
            except ValueError:
                raise ParseError(f"bad date {raw_date!r}", path, lineno)
            try:
                price = float(raw_price)
            except ValueError:
                raise ParseError(f"bad price {raw_price!r}", path, lineno)
            if not np.isfinite(price) or price <= 0.0:
                raise ValidationError(
                    f"{path}:{lineno}: non-positive price {raw_price} for {ticker}"
                )
            if day in rows:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate date {day.isoformat()} for {ticker}"
                )
            rows[day] = price
    if not rows:
        raise ValidationError(f"{path}: no rows for ticker {ticker!r}")
    days = sorted(rows)
    series = PriceSeries(ticker, tuple(days), [rows[d] for d in days])
    logger.debug("loaded %s: %d observations from %s", ticker, len(series), path)
    return series


def load_sector_manifest(path) -> SectorManifest:
    """Read and validate a sector manifest JSON file."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}", path)
    if not isinstance(raw, dict):
        raise ParseError("manifest must be a JSON object", path)
    missing = [k for k in ("sector", "tickers", "benchmark") if k not in raw]
    if missing:
        raise ParseError(f"manifest missing keys: {', '.join(missing)}", path)
    if not isinstance(raw["tickers"], list) or not all(
        isinstance(t, str) for t in raw["tickers"]
    ):
        raise ParseError("manifest 'tickers' must be a list of strings", path)
    return SectorManifest(str(raw["sector"]), tuple(raw["tickers"]), str(raw["benchmark"]))


def align_panel(series: list[PriceSeries], benchmark: PriceSeries) -> PricePanel:
    """Intersect all date sets and restrict every column to that calendar.

    The calendar is the sorted intersection of every constituent's dates
    with the benchmark's.  Raises AlignmentError naming the tickers that
    destroy the overlap when fewer than 2 shared days remain.
    """
    if not series:
        raise AlignmentError("no price series to align")
    tickers = [s.ticker for s in series]
    if len(set(tickers)) != len(tickers):
        raise ValidationError(f"duplicate tickers in alignment input: {tickers}")

    all_series = list(series) + [benchmark]
    date_sets = {s.ticker: frozenset(s.dates) for s in all_series}
    shared = frozenset.intersection(*date_sets.values())
    if len(shared) < 2:
        offenders = []
        for s in all_series:
            others = [d for t, d in date_sets.items() if t != s.ticker]
            if len(frozenset.intersection(*others)) >= 2:
                offenders.append(s.ticker)
        names = ", ".join(sorted(offenders)) if offenders else ", ".join(sorted(date_sets))
        raise AlignmentError(
            f"fewer than 2 shared trading days across inputs (offending tickers: {names})"
        )

    calendar = tuple(sorted(shared))

    def restrict(s: PriceSeries) -> np.ndarray:
        by_date = dict(zip(s.dates, s.prices))
        return np.array([by_date[d] for d in calendar], dtype=np.float64)

    ordered = sorted(series, key=lambda s: s.ticker)
    columns = {s.ticker: restrict(s) for s in ordered}
    panel = PricePanel(
        calendar=calendar,
        tickers=tuple(s.ticker for s in ordered),
        columns=columns,
        benchmark=restrict(benchmark),
    )
    logger.debug(
        "aligned %d tickers onto %d shared days (%s..%s)",
        len(tickers), len(calendar), calendar[0], calendar[-1],
    )
    return panel


def clip_panel(panel: PricePanel, start: date, end: date) -> PricePanel:
    """Restrict a panel's calendar to [start, end] inclusive."""
    if start > end:
        raise WindowError(f"start {start} after end {end}")
    lo = bisect.bisect_left(panel.calendar, start)
    hi = bisect.bisect_right(panel.calendar, end)
    if hi - lo < 2:
        raise WindowError(
            f"window {start}..{end} leaves {hi - lo} trading days (need at least 2)"
        )
    return PricePanel(
        calendar=panel.calendar[lo:hi],
        tickers=panel.tickers,
        columns={t: v[lo:hi] for t, v in panel.columns.items()},
        benchmark=panel.benchmark[lo:hi],
    )
