import pytest

from reidlab.verify import SUITES, run, run_suite


def test_all_suites_pass():
    results = run("all", seed=42)
    assert set(results) == set(SUITES)
    failed = [v.name for vs in results.values() for v in vs if not v.passed]
    assert failed == []


def test_seeded_reproducibility():
    a = [v.measured for v in run_suite("invariants", 7)]
    b = [v.measured for v in run_suite("invariants", 7)]
    assert a == b


def test_polyanin_reported_as_expected_skip():
    skip = [v for v in run_suite("abel", 1) if v.status == "expected-skip"]
    assert [v.name for v in skip] == ["abel_polyanin_degenerate"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
