"""Equal-weight integer-share portfolio construction and calendar rebalancing.

Construction allocates a fixed amount of capital per constituent and
rounds the resulting share counts half-away-from-zero to whole shares.
Rounding can overdraw cash by up to half a share per ticker, so an
explicit clamp follows: while cash is negative, sell one share of the
ticker whose position value exceeds its per-asset target by the most
(ties broken by ticker name).  The clamp keeps every ledger solvent and
fully deterministic.

Rebalancing repeats the same construction at the prevailing prices on
schedule dates derived from the trading calendar:

* daily   — every day after the first;
* monthly — the first trading day of each calendar month after the start
  month;
* yearly  — the first trading day on or after each anniversary of the
  start date (Feb 29 anniversaries fall through to Mar 1);
* never   — no rebalancing at all.

The start day itself is never a schedule date; the initial allocation
covers it.  Trades execute at the same closing price used for marking,
and residual cash earns nothing, so with a zero cost rate portfolio value
is exactly continuous across a rebalance.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import AllocationError, DomainError, InsolvencyError, ValidationError
from .market_data import PricePanel

logger = logging.getLogger(__name__)

FREQUENCIES = ("daily", "monthly", "yearly", "never")


@dataclass(frozen=True)
class CapitalPlan:
    """Initial funding: a fixed amount of capital for each constituent."""

    per_asset_capital: float
    n_assets: int

    def __post_init__(self):
        if self.per_asset_capital <= 0.0:
            raise DomainError(f"per_asset_capital must be positive, got {self.per_asset_capital}")
        if self.n_assets < 1:
            raise DomainError(f"n_assets must be at least 1, got {self.n_assets}")

    @property
    def total_capital(self) -> float:
        return self.per_asset_capital * self.n_assets


@dataclass(frozen=True)
class RebalancePolicy:
    """How often to rebalance and what fraction of traded notional it costs."""

    frequency: str = "yearly"
    cost_rate: float = 0.0

    def __post_init__(self):
        if self.frequency not in FREQUENCIES:
            raise DomainError(f"unknown rebalance frequency {self.frequency!r}")
        if not 0.0 <= self.cost_rate < 1.0:
            raise DomainError(f"cost_rate must lie in [0, 1), got {self.cost_rate}")


@dataclass(frozen=True)
class Ledger:
    """Holdings snapshot: whole shares per ticker plus residual cash."""

    date: date | None
    shares: dict[str, int]
    cash: float

    def __post_init__(self):
        normalized = {}
        for ticker, count in self.shares.items():
            if (
                isinstance(count, bool)
                or not isinstance(count, (int, np.integer))
                or count < 0
            ):
                raise ValidationError(
                    f"share count for {ticker!r} must be a non-negative integer, got {count!r}"
                )
            normalized[ticker] = int(count)
        object.__setattr__(self, "shares", normalized)

    def value(self, prices: dict[str, float]) -> float:
        """Mark the ledger to market, cash included."""
        return sum(self.shares[t] * prices[t] for t in self.shares) + self.cash


@dataclass(frozen=True)
class BacktestResult:
    """Full daily state of one backtest.

    ``value[t] = sum_i shares[i][t] * price[i][t] + cash[t]`` on every day;
    share vectors are piecewise constant and change only on
    ``rebalance_dates``.
    """

    calendar: tuple[date, ...]
    tickers: tuple[str, ...]
    value: np.ndarray
    weights: dict[str, np.ndarray]
    shares: dict[str, np.ndarray]
    cash: np.ndarray
    rebalance_dates: tuple[date, ...]
    initial_capital: float


def round_half_away_from_zero(x: float) -> int:
    """Nearest integer, with .5 rounding away from zero (not banker's)."""
    return int(math.floor(x + 0.5)) if x >= 0.0 else -int(math.floor(-x + 0.5))


def _clamp_overdraft(
    shares: dict[str, int],
    prices: dict[str, float],
    targets: dict[str, float],
    cash: float,
) -> float:
    """Sell shares until cash is non-negative.

    Each step sells one share of the ticker whose position value exceeds
    its target by the most, ties broken by ticker name.  Returns the new
    cash balance.
    """
    while cash < 0.0:
        pick = None
        pick_excess = None
        for ticker in sorted(shares):
            if shares[ticker] == 0:
                continue
            excess = shares[ticker] * prices[ticker] - targets[ticker]
            if pick is None or excess > pick_excess:
                pick = ticker
                pick_excess = excess
        if pick is None:
            raise InsolvencyError("cannot clamp overdraft: no shares left to sell")
        shares[pick] -= 1
        cash += prices[pick]
    return cash


def initial_allocation(
    prices_at_t0: dict[str, float], plan: CapitalPlan, as_of: date | None = None
) -> Ledger:
    """Build the day-0 equal-weight ledger from per-asset capital.

    Shares are per_asset_capital / price rounded to the nearest integer;
    leftover (or overdrawn-then-clamped) capital stays as cash.
    """
    if len(prices_at_t0) != plan.n_assets:
        raise AllocationError(
            f"plan expects {plan.n_assets} assets, got {len(prices_at_t0)} prices"
        )
    for ticker, price in prices_at_t0.items():
        if not np.isfinite(price) or price <= 0.0:
            raise AllocationError(f"non-positive price for {ticker!r}: {price}")

    shares = {
        t: round_half_away_from_zero(plan.per_asset_capital / p)
        for t, p in prices_at_t0.items()
    }
    invested = sum(shares[t] * prices_at_t0[t] for t in shares)
    cash = plan.total_capital - invested
    targets = {t: plan.per_asset_capital for t in shares}
    cash = _clamp_overdraft(shares, prices_at_t0, targets, cash)
    return Ledger(date=as_of, shares=shares, cash=cash)


def rebalance_dates(calendar, frequency: str) -> list[date]:
    """Schedule dates for a trading calendar under one frequency.

    The first calendar day is never included.
    """
    calendar = list(calendar)
    if not calendar:
        raise DomainError("empty calendar")
    if frequency not in FREQUENCIES:
        raise DomainError(f"unknown rebalance frequency {frequency!r}")
    if frequency == "never":
        return []
    if frequency == "daily":
        return calendar[1:]
    if frequency == "monthly":
        first_of_month: dict[tuple[int, int], date] = {}
        for day in calendar:
            first_of_month.setdefault((day.year, day.month), day)
        start_month = (calendar[0].year, calendar[0].month)
        return [d for key, d in sorted(first_of_month.items()) if key != start_month]
    # yearly: first trading day on/after each anniversary of the start date
    start = calendar[0]
    out: list[date] = []
    year = start.year + 1
    while True:
        anniversary = _anniversary(start, year)
        if anniversary > calendar[-1]:
            break
        idx = bisect.bisect_left(calendar, anniversary)
        day = calendar[idx]
        if not out or day != out[-1]:
            out.append(day)
        year += 1
    return out


def _anniversary(start: date, year: int) -> date:
    try:
        return start.replace(year=year)
    except ValueError:  # Feb 29 in a non-leap year
        return date(year, 3, 1)


def rebalance(
    ledger: Ledger,
    prices: dict[str, float],
    policy: RebalancePolicy,
    as_of: date | None = None,
) -> Ledger:
    """Reset a ledger to equal weights at the given prices.

    The portfolio is marked to market, each constituent is retargeted to
    an equal slice of that value, counts are rounded to whole shares, and
    the overdraft clamp restores solvency.  Transaction cost, if any, is
    charged on the traded notional of the rounded-and-clamped order and
    deducted from cash; if the charge itself overdraws, the clamp runs
    again (those final corrective sales are not re-charged).
    """
    missing = [t for t in ledger.shares if t not in prices]
    if missing:
        raise ValidationError(f"prices missing for tickers: {missing}")
    for ticker, price in prices.items():
        if not np.isfinite(price) or price <= 0.0:
            raise AllocationError(f"non-positive price for {ticker!r}: {price}")

    total = ledger.value(prices)
    if total <= 0.0:
        raise InsolvencyError(f"portfolio value {total} is not positive")
    n = len(ledger.shares)
    target = total / n
    targets = {t: target for t in ledger.shares}

    new_shares = {
        t: round_half_away_from_zero(target / prices[t]) for t in ledger.shares
    }
    cash = total - sum(new_shares[t] * prices[t] for t in new_shares)
    cash = _clamp_overdraft(new_shares, prices, targets, cash)

    if policy.cost_rate > 0.0:
        traded = sum(
            abs(new_shares[t] - ledger.shares[t]) * prices[t] for t in new_shares
        )
        cash -= policy.cost_rate * traded
        cash = _clamp_overdraft(new_shares, prices, targets, cash)

    return Ledger(date=as_of if as_of is not None else ledger.date, shares=new_shares, cash=cash)


def run_backtest(panel: PricePanel, plan: CapitalPlan, policy: RebalancePolicy) -> BacktestResult:
    """Simulate the portfolio over a panel's full calendar.

    Day 0 is the initial allocation at day-0 prices; on each schedule date
    the ledger is rebalanced at that day's prices before marking to
    market.
    """
    if len(panel.tickers) != plan.n_assets:
        raise AllocationError(
            f"plan expects {plan.n_assets} assets, panel has {len(panel.tickers)}"
        )

    n_days = len(panel.calendar)
    schedule = set(rebalance_dates(panel.calendar, policy.frequency))
    value = np.empty(n_days, dtype=np.float64)
    cash = np.empty(n_days, dtype=np.float64)
    shares = {t: np.empty(n_days, dtype=np.int64) for t in panel.tickers}
    weights = {t: np.empty(n_days, dtype=np.float64) for t in panel.tickers}

    ledger = None
    applied: list[date] = []
    for i, day in enumerate(panel.calendar):
        prices = panel.prices_at(i)
        if i == 0:
            ledger = initial_allocation(prices, plan, as_of=day)
        elif day in schedule:
            ledger = rebalance(ledger, prices, policy, as_of=day)
            applied.append(day)
        marked = ledger.value(prices)
        value[i] = marked
        cash[i] = ledger.cash
        for t in panel.tickers:
            shares[t][i] = ledger.shares[t]
            weights[t][i] = ledger.shares[t] * prices[t] / marked

    logger.debug(
        "backtest over %d days, %d tickers, %d rebalances (%s)",
        n_days, len(panel.tickers), len(applied), policy.frequency,
    )
    return BacktestResult(
        calendar=panel.calendar,
        tickers=panel.tickers,
        value=value,
        weights=weights,
        shares=shares,
        cash=cash,
        rebalance_dates=tuple(applied),
        initial_capital=plan.total_capital,
    )
