import hashlib
import os

import pytest

from lattice_system.config import DEFAULT_CATALOG_PATH, ConfigManager


def test_defaults_without_env_file(isolated_env):
    config = ConfigManager(str(isolated_env / "ausente.env"))
    assert config.word_len == 4
    assert config.cusp_word_len == 6
    assert config.precision_bits == 128
    assert config.jobs == 4
    assert config.catalog_path == DEFAULT_CATALOG_PATH
    assert os.path.isdir(config.cache_dir)
    assert os.path.isdir(config.logs_dir)


def test_env_file_values(isolated_env, monkeypatch):
    monkeypatch.setattr(os, "environ", os.environ.copy())
    env_file = isolated_env / ".env"
    env_file.write_text("CHL_WORD_LEN=3\nCHL_JOBS=2\nCHL_PRECISION_BITS=256\n", encoding="utf-8")
    config = ConfigManager(str(env_file))
    assert (config.word_len, config.jobs, config.precision_bits) == (3, 2, 256)
    assert config.cusp_word_len == 6


def test_environment_overrides(isolated_env, monkeypatch):
    monkeypatch.setenv("CHL_CUSP_WORD_LEN", "8")
    monkeypatch.setenv("CHL_MAX_ORDER", "500")
    config = ConfigManager(str(isolated_env / "ausente.env"))
    assert config.cusp_word_len == 8
    assert config.max_order == 500


@pytest.mark.parametrize("name,value", [
    ("CHL_WORD_LEN", "0"),
    ("CHL_CUSP_WORD_LEN", "-1"),
    ("CHL_PRECISION_BITS", "16"),
    ("CHL_JOBS", "0"),
])
def test_invalid_values_are_rejected(isolated_env, monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError):
        ConfigManager(str(isolated_env / "ausente.env"))


def test_catalog_digest(isolated_env):
    config = ConfigManager(str(isolated_env / "ausente.env"))
    with open(DEFAULT_CATALOG_PATH, "rb") as f:
        expected = hashlib.sha256(f.read()).hexdigest()
    assert config.catalog_digest() == expected
    other = isolated_env / "catalog.json"
    other.write_bytes(b"{}")
    assert config.catalog_digest(str(other)) != expected
