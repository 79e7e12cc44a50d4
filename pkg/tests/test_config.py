import json
import os

import pytest
from pydantic import ValidationError

from labeldist.config_data import Settings, config_data, load_settings

EXAMPLE = os.path.join(os.path.dirname(__file__), "..", "labeldist", "config.example.json")


def test_example_config_is_valid():
    settings = load_settings(EXAMPLE)

    assert settings.appr.alpha == 0.1
    assert settings.train.hidden == 16
    assert settings.train.pos_weight == 10.0


def test_overrides_merge_into_sections(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"train": {"hidden": 32, "max_epochs": 50}, "threads": 2}))

    settings = load_settings(str(path), {"train": {"hidden": 8}, "emb_dim": 4})

    assert settings.train.hidden == 8
    assert settings.train.max_epochs == 50
    assert settings.threads == 2
    assert settings.emb_dim == 4
    assert config_data(str(path))["threads"] == 2


def test_defaults_without_file():
    settings = load_settings()

    assert settings == Settings(threads=settings.threads)
    assert settings.appr.epsilon == 1e-5


def test_unknown_keys_are_rejected():
    with pytest.raises(ValidationError):
        load_settings(overrides={"learning_rate": 0.1})
    with pytest.raises(ValidationError):
        load_settings(overrides={"appr": {"alpha": 2.0, "epsilon": 1e-5}})
