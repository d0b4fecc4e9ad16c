"""End-to-end helpers tying series, features, and the LSTM engine together.

One-step validation error says little about how a network behaves once it
is fed its own predictions for months: two fits with near-identical val
MSE can drift apart by several percent over a long closed loop, and the
drift direction depends on the initialization seed.  fit_forecaster
therefore trains several candidates that differ only in seed, replays
each over a held-out tail of the history in closed loop, keeps the ones
with the lowest replay error, and averages their forecasts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import date

import numpy as np

from .errors import (EmptyDataError, InsufficientDataError, ResolutionError,
                     ValidationError)
from .features import (ScalerParams, WindowSet, add_time_features,
                       apply_scaler, chronological_split, feature_names,
                       fit_scaler, make_windows)
from .lstm.forecasting import forecast_range
from .lstm.params import (DEFAULT_DROPOUT_RATE, DEFAULT_HIDDEN_SIZES,
                          LstmModel, model_from_json, model_to_json)
from .lstm.training import TrainConfig, TrainReport, train
from .series import LoadRecord, LoadSeries, Resolution

FORECASTER_FORMAT_VERSION = 1

DEFAULT_CANDIDATES = 5
DEFAULT_ENSEMBLE_SIZE = 3
DEFAULT_HOLDOUT_DAYS = 90

# Offset between consecutive candidate seeds. Any constant works; a large
# odd one keeps candidate RNG streams from sharing low bits.
_SEED_STRIDE = 10007


@dataclass(frozen=True)
class PreparedData:
    """Standardized windows ready for training, plus the scaler that made them."""

    train: WindowSet
    val: WindowSet
    scaler: ScalerParams


def default_train_end(series: LoadSeries) -> date:
    """Start of the forecast year: January 1 after the final record.

    A history running through 2018 forecasts 2019, so by default every
    provided record is training data. Pass an explicit `train_end` to
    hold out a tail of the series as a test span instead.
    """
    if not series.records:
        raise EmptyDataError("cannot infer a train_end from an empty series")
    return date(series.records[-1].timestamp.year + 1, 1, 1)


def prepare_training_data(
    series: LoadSeries,
    lookback: int,
    *,
    train_end: date | None = None,
    val_fraction: float = 0.1,
) -> PreparedData:
    """Featurize, standardize, window, and split a daily series.

    Records on/after `train_end` are excluded; the scaler is fit on the
    training rows only.
    """
    if series.resolution is not Resolution.DAILY:
        raise ResolutionError("training data must be a daily series")
    if train_end is None:
        train_end = default_train_end(series)
    records = tuple(r for r in series.records if r.timestamp.date() < train_end)
    return _prepare_records(records, lookback, val_fraction)


def _prepare_records(records, lookback: int, val_fraction: float) -> PreparedData:
    if len(records) < lookback + 2:
        raise InsufficientDataError(
            f"{len(records)} training rows cannot fill lookback {lookback} windows")
    train_series = LoadSeries(records=tuple(records), resolution=Resolution.DAILY)
    rows = add_time_features(train_series)
    scaler = fit_scaler(rows)
    scaled = apply_scaler(rows, scaler)
    windows = make_windows(scaled, lookback)
    train_windows, val_windows = chronological_split(windows, val_fraction)
    return PreparedData(train=train_windows, val=val_windows, scaler=scaler)


@dataclass(frozen=True)
class CandidateReport:
    """One training candidate: its seed, epoch log, score, and fate.

    `score` is the closed-loop RMSE in MW over the held-out tail when a
    holdout was used, otherwise the candidate's best validation MSE in
    standardized units. Scores only rank candidates within one fit call.
    """

    seed: int
    report: TrainReport
    score: float
    selected: bool


@dataclass(frozen=True)
class Forecaster:
    """A small ensemble of trained models; forecasts are member means."""

    members: tuple[LstmModel, ...]

    def __post_init__(self):
        if not self.members:
            raise ValidationError("a forecaster needs at least one member")
        first = self.members[0]
        for member in self.members[1:]:
            if member.lookback != first.lookback:
                raise ValidationError("forecaster members disagree on lookback")
            if member.input_size != first.input_size:
                raise ValidationError("forecaster members disagree on input size")

    @property
    def lookback(self) -> int:
        return self.members[0].lookback


def fit_forecaster(
    series: LoadSeries,
    config: TrainConfig,
    *,
    lookback: int = 30,
    train_end: date | None = None,
    val_fraction: float = 0.1,
    hidden_sizes: tuple[int, ...] = DEFAULT_HIDDEN_SIZES,
    dropout_rate: float = DEFAULT_DROPOUT_RATE,
    n_candidates: int = DEFAULT_CANDIDATES,
    ensemble_size: int = DEFAULT_ENSEMBLE_SIZE,
    holdout_days: int = DEFAULT_HOLDOUT_DAYS,
) -> tuple[Forecaster, tuple[CandidateReport, ...]]:
    """Train `n_candidates` seeds and keep the `ensemble_size` best.

    With `holdout_days` > 0 the last that many records of the training
    span are withheld from fitting; each candidate is scored by the RMSE
    of a closed-loop replay over them, which is what one-step validation
    error cannot measure. With `holdout_days` = 0 candidates are scored
    by their best validation MSE instead and nothing is withheld.
    """
    if n_candidates < 1:
        raise ValidationError("n_candidates must be at least 1")
    if not 1 <= ensemble_size <= n_candidates:
        raise ValidationError("ensemble_size must be in 1..n_candidates")
    if holdout_days < 0:
        raise ValidationError("holdout_days must be non-negative")
    if series.resolution is not Resolution.DAILY:
        raise ResolutionError("training data must be a daily series")

    if train_end is None:
        train_end = default_train_end(series)
    records = tuple(r for r in series.records if r.timestamp.date() < train_end)
    if holdout_days:
        if len(records) <= holdout_days + lookback + 1:
            raise InsufficientDataError(
                f"{len(records)} training rows cannot spare a {holdout_days}-day holdout")
        fit_records, holdout_records = records[:-holdout_days], records[-holdout_days:]
    else:
        fit_records, holdout_records = records, ()
    fit_series = LoadSeries(records=fit_records, resolution=Resolution.DAILY)

    # The horizon-year slice already happened above; prepare on everything left.
    prepared = _prepare_records(fit_records, lookback, val_fraction)
    names = feature_names(Resolution.DAILY)
    holdout_truth = np.array([r.demand for r in holdout_records])

    scored: list[CandidateReport] = []
    models: list[LstmModel] = []
    for k in range(n_candidates):
        candidate_config = replace(config, seed=config.seed + _SEED_STRIDE * k)
        model, report = train(
            prepared.train, prepared.val, candidate_config,
            hidden_sizes=hidden_sizes, dropout_rate=dropout_rate,
            scaler=prepared.scaler, feature_names=names)
        if holdout_days:
            replay = forecast_range(
                model, fit_series,
                holdout_records[0].timestamp.date(),
                holdout_records[-1].timestamp.date())
            preds = np.array([r.demand for r in replay.records])
            score = float(np.sqrt(np.mean((preds - holdout_truth) ** 2)))
        else:
            score = min(epoch.val_mse for epoch in report.epochs)
        scored.append(CandidateReport(seed=candidate_config.seed, report=report,
                                      score=score, selected=False))
        models.append(model)

    order = sorted(range(n_candidates), key=lambda i: scored[i].score)
    keep = set(order[:ensemble_size])
    reports = tuple(replace(c, selected=(i in keep)) for i, c in enumerate(scored))
    members = tuple(models[i] for i in order[:ensemble_size])
    return Forecaster(members=members), reports


def forecast_ensemble(
    forecaster: Forecaster,
    history: LoadSeries,
    start: date,
    end: date,
) -> LoadSeries:
    """Roll every member over [start, end] and average them pointwise."""
    runs = [forecast_range(member, history, start, end)
            for member in forecaster.members]
    if not runs[0].records:
        return runs[0]
    demands = np.mean([[r.demand for r in run.records] for run in runs], axis=0)
    records = tuple(
        LoadRecord(timestamp=r.timestamp, demand=float(v))
        for r, v in zip(runs[0].records, demands))
    return LoadSeries(records=records, resolution=Resolution.DAILY)


def forecaster_to_json(forecaster: Forecaster) -> str:
    doc = {
        "format_version": FORECASTER_FORMAT_VERSION,
        "kind": "forecaster",
        "members": [json.loads(model_to_json(m)) for m in forecaster.members],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def forecaster_from_json(text: str) -> Forecaster:
    """Parse a forecaster document; a bare model document becomes a singleton."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"forecaster file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError("forecaster document must be a JSON object")
    if doc.get("kind") == "forecaster":
        version = doc.get("format_version")
        if version != FORECASTER_FORMAT_VERSION:
            raise ValidationError(
                f"unsupported forecaster format_version {version!r} "
                f"(expected {FORECASTER_FORMAT_VERSION})")
        members = tuple(model_from_json(json.dumps(m)) for m in doc.get("members", ()))
        return Forecaster(members=members)
    return Forecaster(members=(model_from_json(text),))


def save_forecaster(forecaster: Forecaster, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(forecaster_to_json(forecaster))


def load_forecaster(path) -> Forecaster:
    with open(path, "r", encoding="utf-8") as fh:
        return forecaster_from_json(fh.read())
