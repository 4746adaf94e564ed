"""Long-running analysis service speaking line-delimited JSON-RPC 2.0 on
standard streams.

Requests are processed sequentially; explanation generation runs on a
background worker that interleaves `explanationReady` notifications with
normal responses. One project per service instance; `initialize` fully
resets all prior state.
"""
from __future__ import annotations

import json
import sys
import threading
from pathlib import Path

from . import TOOL_NAME, __version__
from .backends import ExplanationResult, ExplanationStatus, make_backend
from .config import ToolConfig, load_config
from .criticality import CriticalityAssessment
from .errors import SecritError
from .metrics import MetricKind
from .pipeline import run_analysis
from .prompts import PLACEHOLDER_TEXT
from .scheduler import schedule
from .cache import ExplanationCache, state_dir

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
NOT_INITIALIZED = -32001
ANALYSIS_FAILED = -32002


class RpcError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _assessment_payload(a: CriticalityAssessment) -> dict:
    method = a.record.method
    return {
        "fqn": a.fqn,
        "file": str(method.file.path),
        "startLine": method.start_line,
        "endLine": method.end_line,
        "value": a.value,
        "rank": a.rank,
        "level": a.level.label if a.level else "Unranked",
    }


class AnalysisService:
    """Protocol state machine, decoupled from the stdio transport."""

    def __init__(self, notify, default_root: Path | None = None):
        self._notify = notify
        self._default_root = default_root
        self._lock = threading.Lock()
        self._reset_locked()

    def _reset_locked(self) -> None:
        self.root: Path | None = None
        self.config: ToolConfig | None = None
        self.classes = None
        self.assessments: list[CriticalityAssessment] = []
        self.metric: MetricKind | None = None
        self.explanations: dict[str, ExplanationResult] = {}
        self._run_id = 0
        self._backend = None

    # -- request handlers ---------------------------------------------------

    def handle(self, method: str, params: dict):
        handler = {
            "initialize": self._initialize,
            "analyze": self._analyze,
            "setMetric": self._set_metric,
            "hover": self._hover,
            "shutdown": self._shutdown,
        }.get(method)
        if handler is None:
            raise RpcError(METHOD_NOT_FOUND, f"unknown method {method!r}")
        return handler(params or {})

    def _initialize(self, params: dict):
        root_param = params.get("projectRoot") or self._default_root
        if root_param is None:
            raise RpcError(INVALID_PARAMS, "initialize requires projectRoot")
        root = Path(root_param)
        if not root.is_dir():
            raise RpcError(ANALYSIS_FAILED, f"project root {root} does not exist")
        overrides = params.get("config") or {}
        cli_like = {
            "metric": overrides.get("metricKind"),
            "tie_rule": overrides.get("tieRule"),
            "show_low": overrides.get("showLow"),
            "explain": overrides.get("explain"),
            "backend_mode": overrides.get("backend"),
        }
        try:
            config = load_config(root, cli_like)
        except SecritError as exc:
            raise RpcError(ANALYSIS_FAILED, str(exc)) from exc
        with self._lock:
            self._reset_locked()
            self.root = root
            self.config = config
        return {
            "tool": TOOL_NAME,
            "version": __version__,
            "projectRoot": str(root),
            "metricKind": config.metric_kind.value,
            "showLow": config.show_low,
        }

    def _require_initialized(self) -> tuple[Path, ToolConfig]:
        if self.root is None or self.config is None:
            raise RpcError(NOT_INITIALIZED, "call initialize first")
        return self.root, self.config

    def _analyze(self, params: dict):
        root, config = self._require_initialized()
        metric = self._metric_param(params.get("metricKind")) or config.metric_kind
        try:
            run = run_analysis(root, config, metric=metric, classes=self.classes)
        except SecritError as exc:
            raise RpcError(ANALYSIS_FAILED, str(exc)) from exc
        with self._lock:
            self.classes = run.classes
            self.assessments = run.assessments
            self.metric = metric
            self._run_id += 1
            run_id = self._run_id
            self.explanations = {
                a.fqn: ExplanationResult.pending(model="", prompt_hash="")
                for a in run.assessments
            }
        if config.explain and run.assessments:
            self._start_explanations(run_id, run.assessments, root, config)
        payload = {
            "metricKind": metric.value,
            "assessments": [_assessment_payload(a) for a in run.assessments],
            "counts": self._counts(run.assessments),
        }
        self._notify("assessmentsReady", payload)
        return payload

    def _set_metric(self, params: dict):
        metric = self._metric_param(params.get("metricKind"))
        if metric is None:
            raise RpcError(INVALID_PARAMS, "setMetric requires metricKind (cc, loc, or lcom)")
        return self._analyze({"metricKind": metric.value})

    def _hover(self, params: dict):
        self._require_initialized()
        fqn = params.get("fqn")
        if not fqn:
            raise RpcError(INVALID_PARAMS, "hover requires fqn")
        with self._lock:
            target = next((a for a in self.assessments if a.fqn == fqn), None)
            result = self.explanations.get(fqn)
        if target is None:
            raise RpcError(ANALYSIS_FAILED, f"no assessment for method {fqn!r}")
        payload = {
            "fqn": fqn,
            "metricKind": target.record.kind.value,
            "metricName": target.record.kind.display_name,
            "value": target.value,
            "level": target.level.label if target.level else "Unranked",
            "rank": target.rank,
        }
        if result is not None and result.status is ExplanationStatus.READY:
            payload["explanationStatus"] = result.status.value
            payload["whyCritical"] = result.why_critical
            payload["precautions"] = list(result.precautions)
        elif result is not None and result.status is ExplanationStatus.FAILED:
            payload["explanationStatus"] = result.status.value
            payload["explanation"] = f"explanation failed: {result.message}"
        else:
            payload["explanationStatus"] = ExplanationStatus.PENDING.value
            payload["explanation"] = PLACEHOLDER_TEXT
        return payload

    def _shutdown(self, params: dict):
        return None

    # -- background explanation flow -----------------------------------------

    def _start_explanations(
        self, run_id: int, assessments: list[CriticalityAssessment], root: Path, config: ToolConfig
    ) -> None:
        if self._backend is None:
            self._backend = make_backend(config.backend)
        backend = self._backend
        cache = ExplanationCache(state_dir(root) / "cache")

        def pump() -> None:
            for fqn, result in schedule(
                assessments,
                config.backend,
                concurrency_limit=config.concurrency_limit,
                cache=cache,
                backend=backend,
            ):
                with self._lock:
                    if self._run_id != run_id:
                        return  # superseded by a newer analysis
                    self.explanations[fqn] = result
                if result.status is not ExplanationStatus.PENDING:
                    payload = {"fqn": fqn, "status": result.status.value}
                    if result.status is ExplanationStatus.READY:
                        payload["whyCritical"] = result.why_critical
                        payload["precautions"] = list(result.precautions)
                    else:
                        payload["message"] = result.message
                    self._notify("explanationReady", payload)

        threading.Thread(target=pump, daemon=True, name="secrit-explain").start()

    @staticmethod
    def _metric_param(raw) -> MetricKind | None:
        if raw is None:
            return None
        try:
            return MetricKind(str(raw).lower())
        except ValueError:
            raise RpcError(INVALID_PARAMS, f"unknown metric kind {raw!r}") from None

    @staticmethod
    def _counts(assessments: list[CriticalityAssessment]) -> dict[str, int]:
        counts = {"High": 0, "Medium": 0, "Low": 0}
        for a in assessments:
            if a.level is not None:
                counts[a.level.label] += 1
        return counts


def serve(project_root: Path | None = None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    write_lock = threading.Lock()

    def send(obj: dict) -> None:
        line = json.dumps(obj, sort_keys=True)
        with write_lock:
            stdout.write(line + "\n")
            stdout.flush()

    def notify(method: str, params: dict) -> None:
        send({"jsonrpc": "2.0", "method": method, "params": params})

    service = AnalysisService(notify, default_root=project_root)

    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
        except ValueError:
            send({"jsonrpc": "2.0", "id": None,
                  "error": {"code": PARSE_ERROR, "message": "parse error"}})
            continue
        if not isinstance(request, dict) or "method" not in request:
            send({"jsonrpc": "2.0", "id": None,
                  "error": {"code": INVALID_REQUEST, "message": "invalid request"}})
            continue
        request_id = request.get("id")
        method = request["method"]
        params = request.get("params") or {}
        try:
            result = service.handle(method, params)
        except RpcError as exc:
            if request_id is not None:
                send({"jsonrpc": "2.0", "id": request_id,
                      "error": {"code": exc.code, "message": str(exc)}})
            continue
        if request_id is not None:
            send({"jsonrpc": "2.0", "id": request_id, "result": result})
        if method == "shutdown":
            break
    return 0
