import json
import subprocess
import sys
import threading
import time

import pytest

from secrit.backends import MockBackend
from secrit.prompts import PLACEHOLDER_TEXT
from secrit.service import (
    ANALYSIS_FAILED,
    INVALID_PARAMS,
    METHOD_NOT_FOUND,
    NOT_INITIALIZED,
    AnalysisService,
    RpcError,
)

from conftest import PETCLINIC


class Notifications:
    def __init__(self):
        self.items = []
        self.event = threading.Event()

    def __call__(self, method, params):
        self.items.append((method, params))
        self.event.set()

    def wait_for(self, method, predicate=lambda p: True, timeout=10.0):
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            for m, p in list(self.items):
                if m == method and predicate(p):
                    return p
            time.sleep(0.01)
        raise AssertionError(f"no {method} notification within {timeout}s: {self.items}")


class GateBackend(MockBackend):
    """Blocks completions until released, to observe Pending states."""

    def __init__(self):
        super().__init__()
        self.gate = threading.Event()

    def complete(self, job):
        self.gate.wait(timeout=10)
        return super().complete(job)


@pytest.fixture()
def service(state_dir):
    notifications = Notifications()
    svc = AnalysisService(notifications)
    return svc, notifications


def _init(svc, backend="mock", **config):
    params = {"projectRoot": str(PETCLINIC), "config": {"backend": backend, **config}}
    return svc.handle("initialize", params)


def test_requests_before_initialize_are_rejected(service):
    svc, _ = service
    with pytest.raises(RpcError) as err:
        svc.handle("analyze", {})
    assert err.value.code == NOT_INITIALIZED


def test_unknown_method(service):
    svc, _ = service
    with pytest.raises(RpcError) as err:
        svc.handle("describeEverything", {})
    assert err.value.code == METHOD_NOT_FOUND


def test_initialize_then_analyze_counts(service):
    svc, notifications = service
    info = _init(svc, explain=False)
    assert info["tool"] == "secrit"
    result = svc.handle("analyze", {"metricKind": "loc"})
    assert result["counts"] == {"High": 35, "Medium": 55, "Low": 9}
    assert len(result["assessments"]) == 99
    notifications.wait_for("assessmentsReady", lambda p: p["metricKind"] == "loc")


def test_set_metric_reanalyzes_with_cc_counts(service):
    svc, notifications = service
    _init(svc, explain=False)
    svc.handle("analyze", {})
    result = svc.handle("setMetric", {"metricKind": "cc"})
    assert result["counts"] == {"High": 5, "Medium": 13, "Low": 81}
    notifications.wait_for(
        "assessmentsReady",
        lambda p: p["metricKind"] == "cc" and p["counts"]["High"] == 5,
    )


def test_set_metric_requires_known_kind(service):
    svc, _ = service
    _init(svc, explain=False)
    with pytest.raises(RpcError) as err:
        svc.handle("setMetric", {"metricKind": "entropy"})
    assert err.value.code == INVALID_PARAMS


def test_hover_before_generation_shows_placeholder(service, monkeypatch):
    svc, notifications = service
    gate = GateBackend()
    monkeypatch.setattr("secrit.service.make_backend", lambda cfg: gate)
    _init(svc)
    svc.handle("analyze", {"metricKind": "loc"})
    hover = svc.handle("hover", {"fqn": "OwnerController.processFindForm(String,int)"})
    assert hover["explanationStatus"] == "Pending"
    assert hover["explanation"] == PLACEHOLDER_TEXT
    assert hover["level"] == "High"
    assert hover["rank"] == 1
    assert hover["value"] == 29
    gate.gate.set()
    notifications.wait_for(
        "explanationReady",
        lambda p: p["fqn"] == "OwnerController.processFindForm(String,int)",
    )
    hover = svc.handle("hover", {"fqn": "OwnerController.processFindForm(String,int)"})
    assert hover["explanationStatus"] == "Ready"
    assert hover["whyCritical"]
    assert len(hover["precautions"]) == 3


def test_hover_unknown_fqn_names_the_method(service):
    svc, _ = service
    _init(svc, explain=False)
    svc.handle("analyze", {})
    with pytest.raises(RpcError) as err:
        svc.handle("hover", {"fqn": "Ghost.vanish()"})
    assert err.value.code == ANALYSIS_FAILED
    assert "Ghost.vanish()" in str(err.value)


def test_explanations_arrive_in_criticality_order(service, monkeypatch):
    svc, notifications = service
    backend = MockBackend()
    monkeypatch.setattr("secrit.service.make_backend", lambda cfg: backend)
    _init(svc)
    svc.handle("analyze", {"metricKind": "cc"})
    notifications.wait_for("explanationReady", lambda p: True)
    deadline = time.monotonic() + 20
    while len(backend.calls) < 99 and time.monotonic() < deadline:
        time.sleep(0.02)
    assert len(backend.calls) == 99
    first_five = backend.calls[:5]
    assert first_five == [
        "ClinicDirectory.resolveQuery(String)",
        "VisitController.processVisitForm(Visit)",
        "ClinicDirectory.register(String,String)",
        "OwnerController.processFindForm(String,int)",
        "ReportGenerator.buildAnnualReport(int)",
    ]


def test_initialize_fully_resets_state(service):
    svc, _ = service
    _init(svc, explain=False)
    svc.handle("analyze", {})
    assert svc.assessments
    _init(svc, explain=False)
    assert svc.assessments == []
    with pytest.raises(RpcError):
        svc.handle("hover", {"fqn": "OwnerController.processFindForm(String,int)"})


def test_stdio_protocol_end_to_end(tmp_path):
    requests = [
        {"jsonrpc": "2.0", "id": 1, "method": "initialize",
         "params": {"projectRoot": str(PETCLINIC), "config": {"backend": "mock", "explain": False}}},
        {"jsonrpc": "2.0", "id": 2, "method": "analyze", "params": {"metricKind": "cc"}},
        {"jsonrpc": "2.0", "id": 3, "method": "hover", "params": {"fqn": "Ghost.vanish()"}},
        "this is not json",
        {"jsonrpc": "2.0", "id": 5, "method": "shutdown"},
    ]
    stdin = "\n".join(r if isinstance(r, str) else json.dumps(r) for r in requests) + "\n"
    proc = subprocess.run(
        [sys.executable, "-m", "secrit.cli", "serve"],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=60,
        env={**__import__("os").environ, "SECRIT_STATE_DIR": str(tmp_path / "state")},
    )
    assert proc.returncode == 0, proc.stderr
    messages = [json.loads(line) for line in proc.stdout.splitlines() if line.strip()]
    responses = {m["id"]: m for m in messages if "id" in m and m.get("id") is not None}
    notifications = [m for m in messages if "method" in m and "id" not in m]
    assert responses[1]["result"]["tool"] == "secrit"
    assert responses[2]["result"]["counts"] == {"High": 5, "Medium": 13, "Low": 81}
    assert responses[3]["error"]["code"] == ANALYSIS_FAILED
    parse_errors = [m for m in messages if m.get("error", {}).get("code") == -32700]
    assert parse_errors, "malformed line should produce a parse error"
    assert responses[5]["result"] is None
    assert any(n["method"] == "assessmentsReady" for n in notifications)
    # exactly one response per request id
    assert sorted(responses) == [1, 2, 3, 5]
