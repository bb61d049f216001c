import json

import pytest

from mica.errors import StartupFailure
from mica.session.config import SessionConfig, load_config


def test_defaults():
    cfg = SessionConfig(recipe_path="r.json")
    cfg.validate()
    assert cfg.tick_period == 2.0
    assert cfg.idle_timeout == 5.0
    assert cfg.tts_speed == 1.0
    assert all(v == "mock" for v in cfg.adapters.values())


def test_load_from_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({
        "recipe_path": "r.json", "tick_period": 1.0, "tts_speed": 2.0,
        "adapters": {"generator": "https://models.example/v1"},
    }))
    cfg = load_config(path, env={})
    assert cfg.tick_period == 1.0
    assert cfg.tts_speed == 2.0
    assert cfg.adapters["generator"] == "https://models.example/v1"
    assert cfg.adapters["classifier"] == "mock"


def test_env_overrides_endpoints(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"recipe_path": "r.json"}))
    cfg = load_config(path, env={"MICA_PERCEIVER_ENDPOINT": "https://vision.example"})
    assert cfg.adapters["perceiver"] == "https://vision.example"


def test_tts_speed_bounds():
    for speed in (0.4, 3.5):
        with pytest.raises(StartupFailure):
            SessionConfig(recipe_path="r.json", tts_speed=speed).validate()
    for speed in (0.5, 3.0):
        SessionConfig(recipe_path="r.json", tts_speed=speed).validate()


def test_unreadable_config_fails(tmp_path):
    with pytest.raises(StartupFailure):
        load_config(tmp_path / "missing.json", env={})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(StartupFailure):
        load_config(bad, env={})


def test_unknown_adapter_role_rejected():
    cfg = SessionConfig(recipe_path="r.json", adapters={"weathervane": "mock"})
    with pytest.raises(StartupFailure):
        cfg.validate()
