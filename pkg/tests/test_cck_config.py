from __future__ import annotations

from cck_cli import main
from cck_config import DEFAULT_CATALOG_PATH, ToolkitConfig, get_config, set_config
from cck_schema import EXIT_USAGE


def test_defaults():
    config = get_config()
    assert config == ToolkitConfig()
    assert config.catalog_path == DEFAULT_CATALOG_PATH
    assert (config.max_signature, config.max_rep_size, config.weyl_rank_limit) == (30, 20, 9)


def test_environment_is_read(monkeypatch):
    monkeypatch.setenv("CCK_SEED", "17")
    monkeypatch.setenv("CCK_MAX_REP_SIZE", "6")
    monkeypatch.setenv("CCK_LOG_LEVEL", "debug")
    set_config(None)

    config = get_config()
    assert config.seed == 17
    assert config.max_rep_size == 6
    assert config.log_level == "DEBUG"


def test_overrides_skip_none():
    config = ToolkitConfig(seed=4).with_overrides(seed=None, max_rep_size=8)
    assert config.seed == 4
    assert config.max_rep_size == 8


def test_cli_flags_override_environment(monkeypatch, capsys):
    monkeypatch.setenv("CCK_MAX_REP_SIZE", "2")
    assert main(["rep", "2", "1"]) == EXIT_USAGE
    assert main(["--max-size", "4", "rep", "2", "1"]) == 0
    assert get_config().max_rep_size == 4


def test_bad_environment_value_is_a_usage_error(monkeypatch, capsys):
    monkeypatch.setenv("CCK_SEED", "many")
    assert main(["clifford", "1", "1"]) == EXIT_USAGE
    assert "Error:" in capsys.readouterr().err
