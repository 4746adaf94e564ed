import json
import os
import subprocess
import sys

import pytest

from conftest import PETCLINIC


def run_cli(*args, env_extra=None, **kwargs):
    env = {**os.environ, **(env_extra or {})}
    return subprocess.run(
        [sys.executable, "-m", "secrit.cli", *args],
        capture_output=True,
        text=True,
        timeout=120,
        env=env,
        **kwargs,
    )


def test_analyze_petclinic_loc_json(state_dir):
    proc = run_cli("analyze", str(PETCLINIC), "--metric", "loc", "--format", "json")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert len(doc["entries"]) == 99
    counts = {"High": 0, "Medium": 0, "Low": 0}
    for e in doc["entries"]:
        counts[e["level"]] += 1
    assert counts == {"High": 35, "Medium": 55, "Low": 9}


def test_analyze_empty_directory_succeeds(tmp_path):
    proc = run_cli("analyze", str(tmp_path), "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["entries"] == []


def test_invalid_metric_is_usage_error():
    proc = run_cli("analyze", str(PETCLINIC), "--metric", "xyz")
    assert proc.returncode == 2
    assert "usage" in proc.stderr.lower() or "invalid choice" in proc.stderr


def test_missing_root_is_analysis_error(tmp_path):
    proc = run_cli("analyze", str(tmp_path / "nope"))
    assert proc.returncode == 1
    assert "error" in proc.stderr.lower()


def test_text_report_hides_low_by_default(state_dir):
    proc = run_cli("analyze", str(PETCLINIC), "--metric", "cc")
    assert proc.returncode == 0
    assert "81 low-criticality methods hidden" in proc.stdout
    shown = run_cli("analyze", str(PETCLINIC), "--metric", "cc", "--show-low")
    assert "hidden" not in shown.stdout


def test_explain_single_method(state_dir):
    proc = run_cli(
        "explain",
        str(PETCLINIC),
        "--method",
        "OwnerRepositoryCustomImpl.save(Owner)",
        "--metric",
        "cc",
        "--backend",
        "mock",
    )
    assert proc.returncode == 0, proc.stderr
    assert "OwnerRepositoryCustomImpl.save(Owner)" in proc.stdout
    assert "cyclomatic complexity = 6" in proc.stdout
    assert "1." in proc.stdout and "3." in proc.stdout


def test_explain_unknown_method_fails(state_dir):
    proc = run_cli("explain", str(PETCLINIC), "--method", "Nope.missing()", "--backend", "mock")
    assert proc.returncode == 1
    assert "Nope.missing()" in proc.stderr


def test_config_check_reports_resolved_values(tmp_path):
    (tmp_path / "secrit.toml").write_text('[analysis]\nmetric = "lcom"\n')
    proc = run_cli("config", "check", str(tmp_path))
    assert proc.returncode == 0
    assert "metric:      lcom" in proc.stdout


def test_config_check_rejects_bad_file(tmp_path):
    (tmp_path / "secrit.toml").write_text('[backend]\nmode = "live"\n')
    proc = run_cli("config", "check", str(tmp_path))
    assert proc.returncode == 1
    assert "endpoint" in proc.stderr


def test_sarif_output_is_valid_json(state_dir):
    proc = run_cli("analyze", str(PETCLINIC), "--metric", "loc", "--format", "sarif")
    doc = json.loads(proc.stdout)
    assert doc["version"] == "2.1.0"
    assert len(doc["runs"][0]["results"]) == 99
