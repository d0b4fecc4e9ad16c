"""Autoregressive daily forecasting.

Each horizon day is predicted from the rolling window of the previous
``lookback`` rows; the prediction (still standardized) is appended together
with the day's true calendar features, the oldest row drops out, and the loop
repeats. Scaler inversion back to MW happens only on the way out.
"""

from __future__ import annotations

from datetime import date, datetime, timedelta

import numpy as np

from ..errors import CalendarError, ResolutionError, ShapeError, ValidationError
from ..features import (DAILY_FEATURE_NAMES, add_time_features,
                        calendar_features, apply_scaler, destandardize_demand,
                        rows_to_matrix)
from ..series import LoadRecord, LoadSeries, Resolution
from .network import forward
from .params import LstmModel

_DAY = timedelta(days=1)


def _check_daily_model(model: LstmModel):
    if model.input_size != 1 + len(DAILY_FEATURE_NAMES):
        raise ValidationError(
            f"model expects {model.input_size} input columns; daily forecasting "
            f"needs {1 + len(DAILY_FEATURE_NAMES)} (demand plus daily calendar features)"
        )


def _check_horizon(horizon_dates: list[date], seed_end: date):
    prev = seed_end
    for d in horizon_dates:
        if d != prev + _DAY:
            raise CalendarError(
                f"horizon dates must be consecutive days; expected "
                f"{(prev + _DAY).isoformat()}, got {d.isoformat()}"
            )
        prev = d


def forecast(model: LstmModel, seed_window: LoadSeries,
             horizon_dates: list[date]) -> LoadSeries:
    """Roll the model forward over `horizon_dates`, returning a daily series.

    `seed_window` is the last `model.lookback` observed days, gap-free,
    ending the day before the first horizon date.
    """
    _check_daily_model(model)
    if seed_window.resolution is not Resolution.DAILY:
        raise ResolutionError("seed window must be a daily series")
    if len(seed_window) != model.lookback:
        raise ShapeError(
            f"seed window has {len(seed_window)} rows, model lookback is {model.lookback}")
    seed_end = seed_window.records[-1].timestamp.date()
    _check_horizon(horizon_dates, seed_end)

    rows = add_time_features(seed_window)
    window = rows_to_matrix(apply_scaler(rows, model.scaler))

    means = np.asarray(model.scaler.means)
    stds = np.asarray(model.scaler.stds)
    records = []
    for d in horizon_dates:
        pred_std = forward(window, model)
        ts = datetime(d.year, d.month, d.day)
        feats = np.asarray(calendar_features(ts, hourly=False))
        new_row = np.empty(window.shape[1])
        new_row[0] = pred_std
        new_row[1:] = (feats - means[1:]) / stds[1:]
        window = np.vstack([window[1:], new_row])
        records.append(LoadRecord(timestamp=ts,
                                  demand=destandardize_demand(pred_std, model.scaler)))
    return LoadSeries(records=tuple(records), resolution=Resolution.DAILY)


def forecast_range(model: LstmModel, history: LoadSeries,
                   start: date, end: date) -> LoadSeries:
    """Forecast every day in [start, end] seeded from the tail of `history`.

    The history must be daily, gap-free, and reach exactly through the day
    before `start`.
    """
    if end < start:
        raise CalendarError(f"end {end.isoformat()} precedes start {start.isoformat()}")
    if history.resolution is not Resolution.DAILY:
        raise ResolutionError("history must be a daily series")
    if len(history) < model.lookback:
        raise ShapeError(
            f"history has {len(history)} rows, need at least lookback {model.lookback}")
    tail = history.records[-model.lookback:]
    if tail[-1].timestamp.date() != start - _DAY:
        raise CalendarError(
            f"history ends {tail[-1].timestamp.date().isoformat()}; forecasting "
            f"from {start.isoformat()} needs history through the prior day")
    seed = LoadSeries(records=tail, resolution=Resolution.DAILY)
    horizon = []
    d = start
    while d <= end:
        horizon.append(d)
        d += _DAY
    return forecast(model, seed, horizon)
