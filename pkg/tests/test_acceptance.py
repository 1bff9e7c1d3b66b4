"""Runs each acceptance criterion once at its stated runtime limit and
prints one pass/fail line per criterion (visible with ``pytest -s`` or in
the captured output of ``pytest -v``)."""
import pytest

from canonext.acceptance import CRITERIA, LIMITS, run_criterion, summary_line

pytestmark = pytest.mark.acceptance

_RUNS = {}


def report(k):
    if k not in _RUNS:
        _RUNS[k] = run_criterion(k, seed=0)
    return _RUNS[k]


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    rep = report(k)
    line = summary_line(k, rep)
    with capsys.disabled():
        print("\n" + line)
    assert rep.checks, "criterion recorded no checks"
    assert rep.info["seconds"] < LIMITS[k]
    assert rep.passed, line


def test_criterion_6_counts():
    rep = report(6)
    assert rep.info["class_pairs"] >= 10_000
    assert "n5_meet" in rep.info["skipped"]


def test_criterion_8_is_not_vacuous():
    rep = report(8)
    assert rep.info["applicable"] == 50
