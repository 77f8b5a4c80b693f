"""Tests for fuzzy name suggestions."""

from casimir_cli.search.fuzzy import NameSearch, did_you_mean


def test_search_finds_close_names():
    search = NameSearch(["gold", "silica", "water", "gold"])
    assert search.choices == ["gold", "silica", "water"]

    results = search.search("silca")
    assert results[0].name == "silica"
    assert results[0].score >= 60


def test_search_empty_query():
    assert NameSearch(["gold"]).search("") == []


def test_did_you_mean():
    assert did_you_mean("translaton", ["translation", "specfun", "lifshitz"]) == "did you mean 'translation'?"
    assert did_you_mean("zzzz", ["b", "a"]) == "choose from a, b"
