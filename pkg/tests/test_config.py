import json

import pytest

from saltkit.config import ROLES, ConfigError, load_config, with_overrides
from saltkit.salt import DEFAULT_TOKEN_BUDGET


def write(tmp_path, obj):
    p = tmp_path / "saltkit.json"
    p.write_text(json.dumps(obj))
    return p


def test_defaults_without_a_file():
    cfg = load_config(None, env={})
    assert cfg.endpoints == {} and cfg.compiler == "gcc" and cfg.jobs == 4
    assert cfg.token_budget == DEFAULT_TOKEN_BUDGET
    with pytest.raises(ConfigError):
        cfg.endpoint("decompiler")


def test_default_endpoint_fills_roles_and_role_entries_win(tmp_path):
    p = write(
        tmp_path,
        {
            "endpoints": {
                "default": {"base_url": "http://a/v1", "model": "m1"},
                "cef": {"model": "fixer", "temperature": 0.2},
            }
        },
    )
    cfg = load_config(p, env={})
    assert set(cfg.endpoints) == set(ROLES)
    assert cfg.endpoint("decompiler").model == "m1"
    assert (cfg.endpoint("cef").base_url, cfg.endpoint("cef").model) == ("http://a/v1", "fixer")
    with pytest.raises(ConfigError):
        cfg.endpoint("summarizer")


def test_file_then_env_then_flags(tmp_path):
    p = write(
        tmp_path,
        {"endpoints": {"default": {"base_url": "http://file", "model": "f"}}, "jobs": 2, "compiler": "cc"},
    )
    env = {"SALTKIT_JOBS": "6", "SALTKIT_MODEL": "env-model", "SALTKIT_BEF_BASE_URL": "http://bef"}
    cfg = load_config(p, env=env)
    assert cfg.jobs == 6 and cfg.compiler == "cc"
    assert cfg.endpoint("symbols").model == "env-model"
    assert cfg.endpoint("bef").base_url == "http://bef" and cfg.endpoint("decompiler").base_url == "http://file"
    cfg = with_overrides(cfg, jobs=9, token_budget=None)
    assert cfg.jobs == 9 and cfg.token_budget == DEFAULT_TOKEN_BUDGET
    with pytest.raises(ConfigError):
        with_overrides(cfg, jobs=0)


@pytest.mark.parametrize("key", ["api_key", "token", "Authorization"])
def test_secrets_in_the_file_are_refused(tmp_path, key):
    p = write(tmp_path, {"endpoints": {"default": {"base_url": "http://a", "model": "m", key: "sk-1"}}})
    with pytest.raises(ConfigError) as exc:
        load_config(p, env={})
    assert "environment" in str(exc.value)


@pytest.mark.parametrize(
    "obj",
    [
        {"endpoints": {"planner": {"base_url": "http://a", "model": "m"}}},
        {"endpoints": {"default": {"base_url": "http://a"}}},
        {"endpoints": {"default": {"base_url": "http://a", "model": "m", "colour": 1}}},
        {"jobs": 0},
        {"token_budget": "lots"},
        [1, 2],
    ],
)
def test_invalid_files(tmp_path, obj):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, obj), env={})


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.json", env={})
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ConfigError):
        load_config(bad, env={})


def test_paths_resolve_against_the_config_file(tmp_path):
    sub = tmp_path / "conf"
    sub.mkdir()
    p = write(sub, {"paths": {"scratch": "work", "templates": "/opt/tpl"}, "token_budget": None})
    cfg = load_config(p, env={})
    assert cfg.scratch == (sub / "work").resolve()
    assert str(cfg.templates) == "/opt/tpl"
    assert cfg.token_budget is None
