"""Integrity and execution checks for the stored expectation manifest."""
from __future__ import annotations

import pytest

from curcat.manifest import (
    MANIFEST,
    ORIGIN_BENCHMARK,
    ORIGIN_DEFINITION,
    ORIGIN_ORACLE,
    ORIGINS,
    REPRODUCTION_IDS,
    expectations_for,
    run_reproduction,
    run_reproductions,
)


def test_manifest_keys_are_unique():
    keys = [record.key for record in MANIFEST]
    assert len(keys) == len(set(keys))


def test_manifest_origins_are_known():
    assert set(ORIGINS) == {ORIGIN_BENCHMARK, ORIGIN_ORACLE, ORIGIN_DEFINITION}
    assert all(record.origin in ORIGINS for record in MANIFEST)


def test_manifest_keys_name_their_reproduction():
    for record in MANIFEST:
        assert record.reproduction in REPRODUCTION_IDS
        assert record.key.startswith(record.reproduction + ".")


def test_every_reproduction_has_expectations():
    for reproduction in REPRODUCTION_IDS:
        assert expectations_for(reproduction)


def test_every_record_carries_a_note():
    assert all(record.note for record in MANIFEST)


def test_expectations_for_rejects_unknown_id():
    with pytest.raises(ValueError, match="unknown reproduction 'nope'"):
        expectations_for("nope")


def test_run_reproduction_rejects_unknown_id():
    with pytest.raises(ValueError, match="unknown reproduction"):
        run_reproduction("nope")


@pytest.fixture(scope="module")
def all_reports():
    return run_reproductions()


def test_all_reproductions_pass(all_reports):
    assert [report["reproduction"] for report in all_reports] == list(
        REPRODUCTION_IDS
    )
    assert all(report["status"] == "pass" for report in all_reports)


def test_reports_echo_manifest_expectations(all_reports):
    by_key = {record.key: record for record in MANIFEST}
    seen = set()
    for report in all_reports:
        for check in report["checks"]:
            record = by_key[check["key"]]
            seen.add(check["key"])
            assert check["origin"] == record.origin
            assert check["expected"] == record.expected
            assert check["computed"] == record.expected
            assert check["status"] == "pass"
    assert seen == set(by_key)


def test_reports_record_the_degree_bound(all_reports):
    assert all(report["degree_bound"] == 2 for report in all_reports)


def test_run_reproductions_accepts_a_subset():
    reports = run_reproductions(("so-image",))
    assert len(reports) == 1
    assert reports[0]["reproduction"] == "so-image"
    assert reports[0]["status"] == "pass"
