"""Report container tests: statuses, serialization, determinism."""

import json

import pytest

from octoks import reports


def sample_report():
    rep = reports.ExperimentReport(
        experiment="demo",
        config={"n": 10, "seed": 3},
        mesh={"domain_tag": "unit_ball", "nodes": 10},
        seeds={"mesh": 3},
        timestamp="1970-01-01T00:00:00+00:00",
    )
    rep.add(reports.Check.bounded("small_enough", 1e-13, 1e-12))
    rep.add(reports.Check.floor("large_enough", 5.0, 1.0))
    rep.add(reports.Check.info("just_a_number", 42.0, "context"))
    return rep


def test_check_statuses():
    assert reports.Check.bounded("x", 2.0, 1.0).status == "fail"
    assert reports.Check.bounded("x", 0.5, 1.0).status == "pass"
    assert reports.Check.floor("x", 0.5, 1.0).status == "fail"
    assert reports.Check.info("x", 0.5).tolerance is None
    with pytest.raises(ValueError):
        reports.Check("x", 1.0, None, "maybe")


def test_report_pass_flag():
    rep = sample_report()
    assert rep.passed
    rep.add(reports.Check.bounded("too_big", 2.0, 1.0))
    assert not rep.passed


def test_json_roundtrip_and_schema():
    rep = sample_report()
    doc = json.loads(rep.to_json())
    assert doc["schema_version"] == reports.SCHEMA_VERSION
    assert doc["experiment"] == "demo"
    assert doc["passed"] is True
    assert doc["config"] == {"n": 10, "seed": 3}
    assert [c["name"] for c in doc["checks"]] == ["small_enough", "large_enough", "just_a_number"]
    assert doc["checks"][2]["tolerance"] is None


def test_fixed_timestamp_means_stable_bytes():
    assert sample_report().to_json() == sample_report().to_json()


def test_write_files(tmp_path):
    rep = sample_report()
    jpath = tmp_path / "r.json"
    cpath = tmp_path / "r.csv"
    rep.write(jpath)
    rep.write_csv(cpath)
    assert json.loads(jpath.read_text())["experiment"] == "demo"
    lines = cpath.read_text().strip().splitlines()
    assert lines[0] == "check,value,tolerance,status"
    assert lines[1].startswith("small_enough,1e-13,1e-12,pass")
    assert len(lines) == 4


def test_check_lines_render():
    rep = sample_report()
    lines = rep.lines()
    assert lines[0].startswith("[PASS]")
    assert "just_a_number" in lines[2]
    assert lines[2].startswith("[INFO]")
