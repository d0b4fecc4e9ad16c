"""Shared fixtures: tiny trained models and CSV builders kept deliberately small."""

from datetime import date, datetime, timedelta

import pytest

from loadcast.features import feature_names
from loadcast.lstm import TrainConfig, train
from loadcast.pipeline import prepare_training_data
from loadcast.series import Resolution
from loadcast.synth import synthetic_daily_series


def hourly_csv(start: datetime, demands) -> str:
    """Render demands (None = missing) as an hourly input CSV."""
    lines = ["timestamp,demand_mw"]
    for i, demand in enumerate(demands):
        ts = start + timedelta(hours=i)
        field = "" if demand is None else repr(float(demand))
        lines.append(f"{ts.strftime('%Y-%m-%dT%H:%M')},{field}")
    return "\n".join(lines) + "\n"


def daily_csv(start: date, demands) -> str:
    lines = ["timestamp,demand_mw"]
    for i, demand in enumerate(demands):
        day = start + timedelta(days=i)
        field = "" if demand is None else repr(float(demand))
        lines.append(f"{day.isoformat()}T00:00,{field}")
    return "\n".join(lines) + "\n"


@pytest.fixture(scope="session")
def tiny_model():
    """A small but genuinely trained daily forecaster (two stacked layers)."""
    series = synthetic_daily_series(date(2018, 1, 1), 140, seed=3)
    prepared = prepare_training_data(series, lookback=10)
    config = TrainConfig(seed=1, max_epochs=3, patience=3)
    model, _ = train(prepared.train, prepared.val, config,
                     hidden_sizes=(6, 5), scaler=prepared.scaler,
                     feature_names=feature_names(Resolution.DAILY))
    return model
