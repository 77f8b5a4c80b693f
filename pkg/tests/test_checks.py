"""Tests for the self-check suites."""

import pytest

from casimir_cli import checks
from casimir_cli.checks import SUITES, CheckOutcome, CheckReport, run_check
from casimir_cli.errors import ConfigError


SLOW_SUITES = {"wigner", "greens-function", "pipeline", "sphere-plate", "cylinder-plate", "matsubara", "properties"}


@pytest.mark.parametrize(
    "suite",
    [pytest.param(name, marks=pytest.mark.slow) if name in SLOW_SUITES else name for name in SUITES],
)
def test_suite_passes(suite):
    report = run_check(suite)
    assert report.suite == suite
    assert report.outcomes
    failed = [f"{o.name}: {o.detail}" for o in report.outcomes if not o.passed]
    assert not failed


def test_every_suite_is_covered():
    assert SLOW_SUITES <= set(SUITES)
    assert len(SUITES) == 11


def test_raising_suite_is_a_failed_outcome(monkeypatch):
    def overflowing():
        raise OverflowError("math range error")

    monkeypatch.setattr(checks, "SUITES", {"broken": overflowing, "fine": lambda: [CheckOutcome("ok", True)]})
    report = run_check("broken")
    assert not report.passed
    assert "OverflowError" in report.outcomes[0].detail

    everything = run_check("all")
    assert [o.name for o in everything.outcomes] == ["broken: suite completed", "fine: ok"]
    assert not everything.passed


def test_unknown_suite_suggests_name():
    with pytest.raises(ConfigError, match="lifshitz"):
        run_check("lifshits")


def test_report_fails_on_any_outcome():
    report = CheckReport("x", [CheckOutcome("a", True), CheckOutcome("b", False, "error 1")])
    assert not report.passed
    assert CheckReport("empty").passed


def test_suite_names_use_dashes():
    assert all("_" not in name for name in SUITES)
