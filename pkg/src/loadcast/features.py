"""Calendar features, z-score standardization, and sliding-window assembly.

A FeatureRow pairs the demand value (the learning target, which is also fed
back in as a model input) with cyclic calendar features. Rows exist in two
states: raw (as emitted by :func:`add_time_features`) and standardized (after
:func:`apply_scaler`); the structure is the same.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime

import numpy as np

from .errors import InsufficientDataError, ShapeError, ValidationError
from .series import LoadSeries, Resolution

DAILY_FEATURE_NAMES = ("year", "month_sin", "month_cos", "doy_sin", "doy_cos")
HOURLY_FEATURE_NAMES = DAILY_FEATURE_NAMES + ("hour_sin", "hour_cos")

# Mean length of the calendar year, so day-of-year phases stay aligned
# across leap years.
DAYS_PER_YEAR = 365.25


@dataclass(frozen=True)
class FeatureRow:
    """Demand target plus calendar features for one time step."""

    target: float
    features: tuple[float, ...]


@dataclass(frozen=True)
class ScalerParams:
    """Per-column mean/std of the [target | features] matrix."""

    means: tuple[float, ...]
    stds: tuple[float, ...]

    def __post_init__(self):
        if len(self.means) != len(self.stds):
            raise ShapeError("means and stds must have equal length")
        if any(s <= 0 for s in self.stds):
            raise ValidationError("scaler stds must be strictly positive")

    @property
    def n_columns(self) -> int:
        return len(self.means)

    @classmethod
    def identity(cls, n_columns: int) -> "ScalerParams":
        return cls(means=(0.0,) * n_columns, stds=(1.0,) * n_columns)


@dataclass(frozen=True)
class WindowSet:
    """Sliding windows over standardized rows.

    ``inputs[i]`` is the (lookback, 1 + n_features) matrix of rows i..i+L-1
    with the demand in column 0; ``targets[i]`` is the demand at row i+L.
    """

    inputs: np.ndarray
    targets: np.ndarray
    lookback: int

    def __post_init__(self):
        if self.inputs.ndim != 3 or self.inputs.shape[1] != self.lookback:
            raise ShapeError(f"inputs must be (n, {self.lookback}, columns)")
        if self.targets.shape != (self.inputs.shape[0],):
            raise ShapeError("targets must have one entry per window")

    def __len__(self) -> int:
        return self.inputs.shape[0]


def _cyclic(value: float, period: float) -> tuple[float, float]:
    angle = 2.0 * math.pi * value / period
    return math.sin(angle), math.cos(angle)


def feature_names(resolution: Resolution) -> tuple[str, ...]:
    return HOURLY_FEATURE_NAMES if resolution is Resolution.HOURLY else DAILY_FEATURE_NAMES


def calendar_features(ts: datetime, hourly: bool) -> tuple[float, ...]:
    """Raw calendar features for one timestamp (cyclic month/day-of-year,
    plus cyclic hour when hourly)."""
    month_sin, month_cos = _cyclic(ts.month, 12.0)
    doy_sin, doy_cos = _cyclic(ts.timetuple().tm_yday, DAYS_PER_YEAR)
    features = [float(ts.year), month_sin, month_cos, doy_sin, doy_cos]
    if hourly:
        features.extend(_cyclic(ts.hour, 24.0))
    return tuple(features)


def add_time_features(series: LoadSeries) -> list[FeatureRow]:
    """Emit one raw FeatureRow per record of a gap-free series."""
    if series.missing_count:
        raise ValidationError("series has missing demands; interpolate before featurizing")

    hourly = series.resolution is Resolution.HOURLY
    return [
        FeatureRow(target=record.demand,
                   features=calendar_features(record.timestamp, hourly))
        for record in series.records
    ]


def rows_to_matrix(rows: list[FeatureRow]) -> np.ndarray:
    """Stack rows into an (n, 1 + n_features) float64 matrix, target first."""
    if not rows:
        return np.zeros((0, 0))
    return np.array([(row.target, *row.features) for row in rows], dtype=np.float64)


def matrix_to_rows(matrix: np.ndarray) -> list[FeatureRow]:
    return [FeatureRow(float(r[0]), tuple(float(v) for v in r[1:])) for r in matrix]


def fit_scaler(rows: list[FeatureRow]) -> ScalerParams:
    """Per-column mean and population std over the given (training) rows.

    Zero-variance columns get std 1 so they pass through unchanged.
    """
    if len(rows) < 2:
        raise InsufficientDataError("fitting a scaler requires at least 2 rows")
    matrix = rows_to_matrix(rows)
    means = matrix.mean(axis=0)
    stds = matrix.std(axis=0)  # population (ddof=0)
    stds = np.where(stds == 0.0, 1.0, stds)
    return ScalerParams(tuple(float(m) for m in means), tuple(float(s) for s in stds))


def _check_columns(rows: list[FeatureRow], params: ScalerParams):
    for row in rows:
        if 1 + len(row.features) != params.n_columns:
            raise ShapeError(
                f"row has {1 + len(row.features)} columns, scaler expects {params.n_columns}"
            )


def apply_scaler(rows: list[FeatureRow], params: ScalerParams) -> list[FeatureRow]:
    """Standardize rows column-wise: (x - mean) / std."""
    _check_columns(rows, params)
    matrix = rows_to_matrix(rows)
    if matrix.size == 0:
        return []
    scaled = (matrix - np.asarray(params.means)) / np.asarray(params.stds)
    return matrix_to_rows(scaled)


def invert_scaler(rows: list[FeatureRow], params: ScalerParams) -> list[FeatureRow]:
    """Undo :func:`apply_scaler`: x * std + mean."""
    _check_columns(rows, params)
    matrix = rows_to_matrix(rows)
    if matrix.size == 0:
        return []
    raw = matrix * np.asarray(params.stds) + np.asarray(params.means)
    return matrix_to_rows(raw)


def standardize_demand(value: float, params: ScalerParams) -> float:
    return (value - params.means[0]) / params.stds[0]


def destandardize_demand(value: float, params: ScalerParams) -> float:
    return value * params.stds[0] + params.means[0]


def make_windows(rows: list[FeatureRow], lookback: int) -> WindowSet:
    """Slide a length-``lookback`` window over rows; each target is the
    demand immediately after its window."""
    if lookback < 1:
        raise ValidationError("lookback must be positive")
    n = len(rows)
    if n <= lookback:
        raise InsufficientDataError(
            f"{n} rows cannot form windows with lookback {lookback}"
        )
    matrix = rows_to_matrix(rows)
    n_windows = n - lookback
    inputs = np.stack([matrix[i : i + lookback] for i in range(n_windows)])
    targets = matrix[lookback:, 0].copy()
    return WindowSet(inputs=inputs, targets=targets, lookback=lookback)


def chronological_split(windows: WindowSet, val_fraction: float = 0.1) -> tuple[WindowSet, WindowSet]:
    """Hold out the chronologically last fraction of windows for validation."""
    if not 0.0 < val_fraction < 1.0:
        raise ValidationError("val_fraction must be in (0, 1)")
    n = len(windows)
    n_val = max(1, int(round(n * val_fraction)))
    if n_val >= n:
        raise InsufficientDataError(f"cannot hold out {n_val} of {n} windows")
    split = n - n_val
    train = WindowSet(windows.inputs[:split], windows.targets[:split], windows.lookback)
    val = WindowSet(windows.inputs[split:], windows.targets[split:], windows.lookback)
    return train, val
