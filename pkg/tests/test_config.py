"""Flat JSON configuration loading and validation."""

import pytest

from loadcast.config import ToolkitConfig, config_from_dict, load_config
from loadcast.errors import ParseError, ValidationError


class TestDefaults:
    def test_field_defaults(self):
        cfg = ToolkitConfig()
        assert cfg.lookback == 30
        assert cfg.val_fraction == 0.1
        assert cfg.hidden_sizes == (50, 50, 50, 50)
        assert cfg.dropout_rate == 0.2
        assert cfg.n_candidates == 5
        assert cfg.ensemble_size == 3
        assert cfg.holdout_days == 90
        assert cfg.weekend_days == frozenset({4, 5})
        assert cfg.cef_registry is None
        assert cfg.train.learning_rate == 0.001
        assert cfg.train.batch_size == 32

    def test_with_seed(self):
        cfg = ToolkitConfig().with_seed(99)
        assert cfg.train.seed == 99
        assert ToolkitConfig().train.seed == 0
        assert cfg.lookback == 30


class TestFromDict:
    def test_flat_document(self):
        cfg = config_from_dict({
            "learning_rate": 0.01, "max_epochs": 7, "seed": 3,
            "lookback": 14, "hidden_sizes": [8, 8], "dropout_rate": 0.1,
            "n_candidates": 2, "ensemble_size": 1, "holdout_days": 30,
            "weekend_days": ["friday", "saturday"],
            "cef_registry": "factors.csv",
        })
        assert cfg.train.learning_rate == 0.01
        assert cfg.train.max_epochs == 7
        assert cfg.train.seed == 3
        assert cfg.lookback == 14
        assert cfg.hidden_sizes == (8, 8)
        assert cfg.dropout_rate == 0.1
        assert (cfg.n_candidates, cfg.ensemble_size, cfg.holdout_days) == (2, 1, 30)
        assert cfg.weekend_days == frozenset({4, 5})
        assert cfg.cef_registry == "factors.csv"

    def test_empty_document_is_defaults(self):
        assert config_from_dict({}) == ToolkitConfig()

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError, match="lerning_rate"):
            config_from_dict({"lerning_rate": 0.01})

    def test_weekend_day_names(self):
        cfg = config_from_dict({"weekend_days": ["Sunday"]})
        assert cfg.weekend_days == frozenset({6})
        with pytest.raises(ValidationError):
            config_from_dict({"weekend_days": ["caturday"]})
        with pytest.raises(ValidationError):
            config_from_dict({"weekend_days": "friday"})

    def test_not_an_object(self):
        with pytest.raises(ValidationError):
            config_from_dict([1, 2, 3])


class TestValidation:
    @pytest.mark.parametrize("overrides", [
        {"lookback": 0},
        {"val_fraction": 0.0},
        {"val_fraction": 1.0},
        {"hidden_sizes": ()},
        {"hidden_sizes": (0,)},
        {"dropout_rate": 1.0},
        {"dropout_rate": -0.1},
        {"n_candidates": 0},
        {"ensemble_size": 0},
        {"ensemble_size": 6},
        {"holdout_days": -1},
        {"weekend_days": frozenset()},
        {"weekend_days": frozenset({7})},
    ])
    def test_invalid_values(self, overrides):
        with pytest.raises(ValidationError):
            ToolkitConfig(**overrides)


class TestLoad:
    def test_load_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"max_epochs": 5, "lookback": 12}\n')
        cfg = load_config(path)
        assert cfg.train.max_epochs == 5
        assert cfg.lookback == 12

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{\n  "max_epochs": 5,\n  oops\n}\n')
        with pytest.raises(ParseError) as exc:
            load_config(path)
        assert exc.value.line == 3
