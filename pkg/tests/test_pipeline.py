"""Candidate selection, ensembling, and forecaster persistence."""

from datetime import date, timedelta

import numpy as np
import pytest

from loadcast.errors import (EmptyDataError, InsufficientDataError,
                             ResolutionError, ValidationError)
from loadcast.features import add_time_features, fit_scaler
from loadcast.lstm import TrainConfig
from loadcast.lstm.forecasting import forecast_range
from loadcast.pipeline import (CandidateReport, Forecaster, default_train_end,
                               fit_forecaster, forecast_ensemble,
                               forecaster_from_json, forecaster_to_json,
                               load_forecaster, prepare_training_data,
                               save_forecaster)
from loadcast.series import LoadSeries, Resolution
from loadcast.synth import synthetic_daily_series

FAST = TrainConfig(seed=1, max_epochs=2, patience=2, batch_size=64)
SMALL = dict(lookback=8, hidden_sizes=(5,))


@pytest.fixture(scope="module")
def history():
    return synthetic_daily_series(date(2017, 1, 1), 400, seed=6)


@pytest.fixture(scope="module")
def fitted(history):
    forecaster, candidates = fit_forecaster(
        history, FAST, n_candidates=3, ensemble_size=2, holdout_days=30,
        **SMALL)
    return forecaster, candidates


class TestPrepare:
    def test_default_train_end_is_next_january(self, history):
        assert default_train_end(history) == date(2019, 1, 1)
        with pytest.raises(EmptyDataError):
            default_train_end(LoadSeries((), Resolution.DAILY))

    def test_scaler_fit_on_training_slice_only(self, history):
        cut = date(2017, 9, 1)
        prepared = prepare_training_data(history, 8, train_end=cut)
        kept = LoadSeries(tuple(r for r in history.records
                                if r.timestamp.date() < cut), Resolution.DAILY)
        assert prepared.scaler == fit_scaler(add_time_features(kept))
        total = len(prepared.train) + len(prepared.val)
        assert total == len(kept) - 8

    def test_val_is_chronological_tail(self, history):
        prepared = prepare_training_data(history, 8, val_fraction=0.25)
        assert len(prepared.val) == pytest.approx(0.25 * (len(history) - 8), abs=1)
        assert prepared.train.targets[-1] != prepared.val.targets[-1]

    def test_hourly_series_rejected(self):
        from datetime import datetime
        from conftest import hourly_csv
        from loadcast.series import parse_load_csv
        hourly = parse_load_csv(hourly_csv(datetime(2019, 1, 1), [1.0] * 48))
        with pytest.raises(ResolutionError):
            prepare_training_data(hourly, 4)

    def test_too_short_series_rejected(self, history):
        with pytest.raises(InsufficientDataError):
            prepare_training_data(history, 8, train_end=date(2017, 1, 6))


class TestFitForecaster:
    def test_counts_and_selection(self, fitted):
        forecaster, candidates = fitted
        assert len(forecaster.members) == 2
        assert len(candidates) == 3
        assert sum(c.selected for c in candidates) == 2
        kept = sorted(c.score for c in candidates)[:2]
        assert sorted(c.score for c in candidates if c.selected) == kept

    def test_candidate_seeds_derive_from_config(self, fitted):
        _, candidates = fitted
        assert candidates[0].seed == FAST.seed
        assert len({c.seed for c in candidates}) == 3

    def test_members_ordered_best_first(self, fitted, history):
        forecaster, candidates = fitted
        best = min(candidates, key=lambda c: c.score)
        start = history.records[-1].timestamp.date() + timedelta(days=1)
        lead = forecast_range(forecaster.members[0], history, start, start)
        again = forecast_range(forecaster.members[0], history, start, start)
        assert lead.records == again.records
        assert best.selected

    def test_knob_validation(self, history):
        with pytest.raises(ValidationError):
            fit_forecaster(history, FAST, n_candidates=0, **SMALL)
        with pytest.raises(ValidationError):
            fit_forecaster(history, FAST, n_candidates=2, ensemble_size=3, **SMALL)
        with pytest.raises(ValidationError):
            fit_forecaster(history, FAST, holdout_days=-1, **SMALL)

    def test_holdout_larger_than_series_rejected(self, history):
        with pytest.raises(InsufficientDataError):
            fit_forecaster(history, FAST, holdout_days=395, **SMALL)

    def test_no_holdout_scores_by_val_mse(self, history):
        forecaster, candidates = fit_forecaster(
            history, FAST, n_candidates=2, ensemble_size=1, holdout_days=0,
            **SMALL)
        assert len(forecaster.members) == 1
        for candidate in candidates:
            best_val = min(r.val_mse for r in candidate.report.epochs)
            assert candidate.score == best_val

    def test_train_end_slices_history(self, history):
        cut = date(2017, 10, 1)
        forecaster, _ = fit_forecaster(history, FAST, train_end=cut,
                                       n_candidates=1, ensemble_size=1,
                                       holdout_days=20, **SMALL)
        member = forecaster.members[0]
        kept = LoadSeries(tuple(r for r in history.records
                                if r.timestamp.date() < cut)[:-20],
                          Resolution.DAILY)
        assert member.scaler == fit_scaler(add_time_features(kept))


class TestForecastEnsemble:
    def test_singleton_matches_member(self, history):
        forecaster, _ = fit_forecaster(history, FAST, n_candidates=1,
                                       ensemble_size=1, holdout_days=0, **SMALL)
        start = history.records[-1].timestamp.date() + timedelta(days=1)
        end = start + timedelta(days=6)
        ens = forecast_ensemble(forecaster, history, start, end)
        solo = forecast_range(forecaster.members[0], history, start, end)
        assert ens.records == solo.records

    def test_mean_of_members(self, fitted, history):
        forecaster, _ = fitted
        start = history.records[-1].timestamp.date() + timedelta(days=1)
        end = start + timedelta(days=4)
        ens = forecast_ensemble(forecaster, history, start, end)
        runs = [forecast_range(m, history, start, end)
                for m in forecaster.members]
        for i, record in enumerate(ens.records):
            mean = np.mean([run.records[i].demand for run in runs])
            assert record.demand == pytest.approx(mean, rel=1e-12)

    def test_forecaster_invariants(self, fitted):
        forecaster, _ = fitted
        with pytest.raises(ValidationError):
            Forecaster(members=())
        rng = np.random.default_rng(0)
        from loadcast.lstm.params import init_model
        other = init_model(6, forecaster.lookback + 1, rng=rng, hidden_sizes=(3,))
        with pytest.raises(ValidationError):
            Forecaster(members=(forecaster.members[0], other))


class TestPersistence:
    def test_json_round_trip_bitwise(self, fitted, history):
        forecaster, _ = fitted
        back = forecaster_from_json(forecaster_to_json(forecaster))
        assert len(back.members) == len(forecaster.members)
        for a, b in zip(forecaster.members, back.members):
            for pa, pb in zip(a.parameters(), b.parameters()):
                np.testing.assert_array_equal(pa, pb)
            assert a.scaler == b.scaler
        start = history.records[-1].timestamp.date() + timedelta(days=1)
        end = start + timedelta(days=3)
        assert (forecast_ensemble(back, history, start, end).records ==
                forecast_ensemble(forecaster, history, start, end).records)

    def test_file_round_trip(self, fitted, tmp_path):
        forecaster, _ = fitted
        path = tmp_path / "forecaster.json"
        save_forecaster(forecaster, path)
        back = load_forecaster(path)
        assert len(back.members) == len(forecaster.members)

    def test_bare_model_document_becomes_singleton(self, fitted):
        forecaster, _ = fitted
        from loadcast.lstm.params import model_to_json
        single = forecaster_from_json(model_to_json(forecaster.members[0]))
        assert len(single.members) == 1

    def test_bad_documents_rejected(self):
        with pytest.raises(ValidationError):
            forecaster_from_json("{not json")
        with pytest.raises(ValidationError):
            forecaster_from_json('{"kind": "forecaster", "format_version": 99, '
                                 '"members": []}')
        with pytest.raises(ValidationError):
            forecaster_from_json('[1, 2]')
