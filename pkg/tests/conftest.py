"""Shared fixtures and helpers for the test suite."""

from datetime import date, timedelta

import numpy as np
import pytest

from rebal.returns import ReturnSeries


def trading_days(n: int, start: date = date(2021, 1, 4)) -> tuple[date, ...]:
    """n consecutive Mon-Fri days starting at ``start``."""
    days = []
    day = start
    while len(days) < n:
        if day.weekday() < 5:
            days.append(day)
        day += timedelta(days=1)
    return tuple(days)


def daily_series(values, start: date = date(2021, 1, 4)) -> ReturnSeries:
    """Wrap raw simple returns in a daily ReturnSeries on a weekday calendar."""
    values = np.asarray(values, dtype=np.float64)
    return ReturnSeries(trading_days(len(values), start), values)


def random_returns(rng: np.random.Generator, n: int,
                   mu: float = 0.0005, sigma: float = 0.02) -> np.ndarray:
    """Plausible daily stock returns, guaranteed above -1."""
    return np.maximum(rng.normal(mu, sigma, size=n), -0.95)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
