"""Seeded synthetic daily demand series for benchmarks and pipeline tests."""

from __future__ import annotations

from datetime import date, datetime, timedelta

import numpy as np

from .errors import ValidationError
from .features import DAYS_PER_YEAR
from .series import LoadRecord, LoadSeries, Resolution


def synthetic_daily_series(
    start: date,
    n_days: int,
    *,
    base_mw: float = 6000.0,
    amplitude_mw: float = 900.0,
    trend_per_year: float = 0.02,
    noise_fraction: float = 0.02,
    phase: float = -2.0,
    seed: int = 0,
) -> LoadSeries:
    """Base + yearly sinusoid + linear trend + Gaussian noise.

    demand(t) = base * (1 + trend_per_year * t/365.25)
                + amplitude * sin(2*pi*doy/365.25 + phase)
                + N(0, (noise_fraction * base)^2)
    """
    if n_days < 1:
        raise ValidationError("n_days must be positive")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, noise_fraction * base_mw, size=n_days)
    records = []
    for t in range(n_days):
        day = start + timedelta(days=t)
        doy = day.timetuple().tm_yday
        demand = (base_mw * (1.0 + trend_per_year * t / DAYS_PER_YEAR)
                  + amplitude_mw * np.sin(2.0 * np.pi * doy / DAYS_PER_YEAR + phase)
                  + noise[t])
        records.append(LoadRecord(
            timestamp=datetime(day.year, day.month, day.day),
            demand=float(max(demand, 0.0))))
    return LoadSeries(records=tuple(records), resolution=Resolution.DAILY)


def inject_shock(series: LoadSeries, start: date, end: date,
                 factor: float) -> LoadSeries:
    """Scale demand by `factor` on every day in [start, end]."""
    if factor < 0:
        raise ValidationError("shock factor must be non-negative")
    records = []
    for record in series.records:
        day = record.timestamp.date()
        if not record.missing and start <= day <= end:
            records.append(LoadRecord(timestamp=record.timestamp,
                                      demand=record.demand * factor))
        else:
            records.append(record)
    return LoadSeries(records=tuple(records), resolution=series.resolution)
