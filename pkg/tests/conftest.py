from pathlib import Path

import pytest

from secrit.model import SourceFile
from secrit.sources import load_project, parse_source


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: criterion from the acceptance gate")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if getattr(report, "when", "call") != "call":
                continue
            if "test_acceptance.py" not in str(getattr(report, "nodeid", "")):
                continue
            name = report.nodeid.split("::")[-1]
            summary = dict(getattr(report, "user_properties", [])).get("summary", "")
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((name, status, summary))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status, summary in sorted(lines):
            suffix = f" - {summary}" if summary else ""
            terminalreporter.write_line(f"[{status}] {name}{suffix}")

FIXTURES = Path(__file__).parent / "fixtures"
PETCLINIC = FIXTURES / "petclinic"
ORACLE_CSV = FIXTURES / "oracle" / "metrics_oracle.csv"
GOLDEN = FIXTURES / "golden"
SMALL = FIXTURES / "small"


def parse_fixture(name: str):
    """Parse one small fixture file into class models."""
    path = SMALL / name
    data = path.read_bytes()
    classes, _ = parse_source(SourceFile.from_bytes(path, data), data)
    return classes


@pytest.fixture(scope="session")
def petclinic_classes():
    classes, diagnostics = load_project(PETCLINIC)
    assert not diagnostics, [str(d.message) for d in diagnostics]
    return classes


@pytest.fixture()
def state_dir(tmp_path, monkeypatch):
    d = tmp_path / "state"
    monkeypatch.setenv("SECRIT_STATE_DIR", str(d))
    return d
