import pytest

from lattice_system.utils.simple_cache import SimpleCacheManager


@pytest.fixture
def cache(tmp_path):
    return SimpleCacheManager(str(tmp_path / "cache"))


def test_verdict_key():
    key = SimpleCacheManager.verdict_key("ab" * 32, "G28", (2, 5), 4)
    assert key == "abababababababab_G28_2_5_w4"


def test_save_and_load(cache):
    data = {"family": "G29", "params": [3], "arithmetic": False}
    assert cache.save_data("g29", data)
    assert cache.load_data("g29") == data
    assert cache.load_data("ausente") is None


def test_unserializable_data_is_not_saved(cache):
    assert not cache.save_data("ruim", {"x": {1, 2}})


def test_cache_validity(cache):
    cache.save_data("g30", {"arithmetic": True})
    assert cache.is_cache_valid("g30", max_age_hours=1)
    assert not cache.is_cache_valid("g30", max_age_hours=0)
    assert not cache.is_cache_valid("ausente")


def test_status_and_clear(cache):
    cache.save_data("a", [1])
    cache.save_data("b", [2])
    status = cache.get_cache_status()
    assert list(status.columns) == ["file_name", "last_modified", "age_hours", "size_kb"]
    assert list(status["file_name"]) == ["a.json", "b.json"]
    assert cache.clear_cache()
    assert cache.get_cache_status().empty
