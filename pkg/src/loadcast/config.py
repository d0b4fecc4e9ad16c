"""Toolkit configuration: a flat JSON document.

Every TrainConfig field can be set, plus the windowing, dropout, weekend, and
emission-registry settings. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace

from .analytics import DEFAULT_WEEKEND_DAYS
from .errors import ParseError, ValidationError
from .lstm.params import DEFAULT_DROPOUT_RATE, DEFAULT_HIDDEN_SIZES
from .lstm.training import TrainConfig
from .pipeline import (DEFAULT_CANDIDATES, DEFAULT_ENSEMBLE_SIZE,
                       DEFAULT_HOLDOUT_DAYS)

_DAY_NAMES = {
    "monday": 0, "tuesday": 1, "wednesday": 2, "thursday": 3,
    "friday": 4, "saturday": 5, "sunday": 6,
}

_TRAIN_KEYS = {f.name for f in fields(TrainConfig)}
_INT_TRAIN_KEYS = {"max_epochs", "patience", "batch_size", "seed"}


@dataclass(frozen=True)
class ToolkitConfig:
    train: TrainConfig = TrainConfig()
    lookback: int = 30
    val_fraction: float = 0.1
    hidden_sizes: tuple[int, ...] = DEFAULT_HIDDEN_SIZES
    dropout_rate: float = DEFAULT_DROPOUT_RATE
    n_candidates: int = DEFAULT_CANDIDATES
    ensemble_size: int = DEFAULT_ENSEMBLE_SIZE
    holdout_days: int = DEFAULT_HOLDOUT_DAYS
    weekend_days: frozenset[int] = DEFAULT_WEEKEND_DAYS
    cef_registry: str | None = None

    def __post_init__(self):
        if self.lookback < 1:
            raise ValidationError("lookback must be positive")
        if not 0.0 < self.val_fraction < 1.0:
            raise ValidationError("val_fraction must be in (0, 1)")
        if not self.hidden_sizes or any(h < 1 for h in self.hidden_sizes):
            raise ValidationError("hidden_sizes must be positive integers")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValidationError("dropout_rate must be in [0, 1)")
        if self.n_candidates < 1:
            raise ValidationError("n_candidates must be at least 1")
        if not 1 <= self.ensemble_size <= self.n_candidates:
            raise ValidationError("ensemble_size must be in 1..n_candidates")
        if self.holdout_days < 0:
            raise ValidationError("holdout_days must be non-negative")
        if not self.weekend_days or not self.weekend_days <= set(range(7)):
            raise ValidationError("weekend_days must be a non-empty subset of 0-6")

    def with_seed(self, seed: int) -> "ToolkitConfig":
        return replace(self, train=replace(self.train, seed=seed))


def _parse_weekend(value) -> frozenset[int]:
    if not isinstance(value, list):
        raise ValidationError("weekend_days must be a list of day names")
    days = set()
    for item in value:
        name = str(item).strip().lower()
        if name not in _DAY_NAMES:
            raise ValidationError(f"unknown weekday name {item!r}")
        days.add(_DAY_NAMES[name])
    return frozenset(days)


def config_from_dict(doc: dict) -> ToolkitConfig:
    if not isinstance(doc, dict):
        raise ValidationError("config document must be a JSON object")
    train_kwargs = {}
    toolkit_kwargs = {}
    for key, value in doc.items():
        if key in _TRAIN_KEYS:
            train_kwargs[key] = int(value) if key in _INT_TRAIN_KEYS else float(value)
        elif key == "lookback":
            toolkit_kwargs["lookback"] = int(value)
        elif key == "val_fraction":
            toolkit_kwargs["val_fraction"] = float(value)
        elif key == "hidden_sizes":
            toolkit_kwargs["hidden_sizes"] = tuple(int(v) for v in value)
        elif key == "dropout_rate":
            toolkit_kwargs["dropout_rate"] = float(value)
        elif key in ("n_candidates", "ensemble_size", "holdout_days"):
            toolkit_kwargs[key] = int(value)
        elif key == "weekend_days":
            toolkit_kwargs["weekend_days"] = _parse_weekend(value)
        elif key == "cef_registry":
            toolkit_kwargs["cef_registry"] = str(value) if value is not None else None
        else:
            raise ValidationError(f"unknown config key {key!r}")
    return ToolkitConfig(train=TrainConfig(**train_kwargs), **toolkit_kwargs)


def load_config(path) -> ToolkitConfig:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc.msg}", line=exc.lineno) from None
    return config_from_dict(doc)
