"""Tool configuration: secrit.toml at the project root, environment
variables, then CLI flags, later sources winning (CLI > env > file >
defaults).

Only the key-value subset of TOML that the documented config uses is
parsed: [section] headers, strings, numbers, and booleans.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .backends import BackendConfig
from .criticality import DEFAULT_TIE_RULE, TieRule
from .errors import ConfigError
from .metrics import MetricKind

CONFIG_FILENAME = "secrit.toml"

ENV_METRIC = "SECRIT_METRIC"
ENV_TIE_RULE = "SECRIT_TIE_RULE"
ENV_BACKEND_MODE = "SECRIT_BACKEND"
ENV_ENDPOINT = "SECRIT_ENDPOINT_URL"
ENV_MODEL = "SECRIT_MODEL"


@dataclass(frozen=True)
class ToolConfig:
    metric_kind: MetricKind = MetricKind.LOC
    tie_rule: TieRule = DEFAULT_TIE_RULE
    show_low: bool = False
    explain: bool = True
    concurrency_limit: int = 2
    backend: BackendConfig = field(default_factory=BackendConfig)


def _parse_scalar(raw: str, path: Path, line_no: int):
    raw = raw.strip()
    if raw.startswith('"') and raw.endswith('"') and len(raw) >= 2:
        return raw[1:-1]
    if raw in ("true", "false"):
        return raw == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{path}:{line_no}: cannot parse value {raw!r}") from None


def parse_config_file(path: Path) -> dict[str, dict[str, object]]:
    sections: dict[str, dict[str, object]] = {}
    current = sections.setdefault("", {})
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            current = sections.setdefault(stripped[1:-1].strip(), {})
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{line_no}: expected key = value")
        key, _, raw = stripped.partition("=")
        current[key.strip()] = _parse_scalar(raw, path, line_no)
    return sections


def _metric(value: str) -> MetricKind:
    try:
        return MetricKind(value.lower())
    except ValueError:
        raise ConfigError(f"unknown metric {value!r} (expected cc, loc, or lcom)") from None


def _tie_rule(value: str) -> TieRule:
    try:
        return TieRule(value)
    except ValueError:
        valid = ", ".join(r.value for r in TieRule)
        raise ConfigError(f"unknown tie rule {value!r} (expected one of: {valid})") from None


def load_config(project_root: Path, cli_overrides: dict | None = None) -> ToolConfig:
    config = ToolConfig()
    file_path = Path(project_root) / CONFIG_FILENAME
    if file_path.is_file():
        config = _apply_file(config, parse_config_file(file_path))
    config = _apply_env(config)
    if cli_overrides:
        config = _apply_overrides(config, cli_overrides)
    if config.concurrency_limit < 1:
        raise ConfigError("concurrency limit must be >= 1")
    if config.backend.mode not in ("mock", "live"):
        raise ConfigError(f"backend mode must be mock or live, not {config.backend.mode!r}")
    if config.backend.mode == "live" and not config.backend.endpoint_url:
        raise ConfigError("live backend requires an endpoint URL")
    return config


def _apply_file(config: ToolConfig, sections: dict[str, dict[str, object]]) -> ToolConfig:
    analysis = sections.get("analysis", {})
    explain = sections.get("explain", {})
    backend = sections.get("backend", {})
    b = config.backend
    b = replace(
        b,
        mode=str(backend.get("mode", b.mode)),
        endpoint_url=str(backend.get("endpoint_url", b.endpoint_url)),
        model_name=str(backend.get("model", b.model_name)),
        api_key_env=str(backend.get("api_key_env", b.api_key_env)),
        timeout=float(backend.get("timeout_seconds", b.timeout)),
        max_retries=int(backend.get("max_retries", b.max_retries)),
    )
    if "temperature" in backend:
        b = replace(b, temperature=float(backend["temperature"]))
    if "reasoning_effort" in backend:
        b = replace(b, reasoning_effort=str(backend["reasoning_effort"]))
    return replace(
        config,
        metric_kind=_metric(str(analysis.get("metric", config.metric_kind.value))),
        tie_rule=_tie_rule(str(analysis.get("tie_rule", config.tie_rule.value))),
        show_low=bool(analysis.get("show_low", config.show_low)),
        explain=bool(explain.get("enabled", config.explain)),
        concurrency_limit=int(explain.get("concurrency", config.concurrency_limit)),
        backend=b,
    )


def _apply_env(config: ToolConfig) -> ToolConfig:
    if os.environ.get(ENV_METRIC):
        config = replace(config, metric_kind=_metric(os.environ[ENV_METRIC]))
    if os.environ.get(ENV_TIE_RULE):
        config = replace(config, tie_rule=_tie_rule(os.environ[ENV_TIE_RULE]))
    backend = config.backend
    if os.environ.get(ENV_BACKEND_MODE):
        backend = replace(backend, mode=os.environ[ENV_BACKEND_MODE])
    if os.environ.get(ENV_ENDPOINT):
        backend = replace(backend, endpoint_url=os.environ[ENV_ENDPOINT])
    if os.environ.get(ENV_MODEL):
        backend = replace(backend, model_name=os.environ[ENV_MODEL])
    return replace(config, backend=backend)


def _apply_overrides(config: ToolConfig, overrides: dict) -> ToolConfig:
    backend = config.backend
    if overrides.get("backend_mode"):
        backend = replace(backend, mode=overrides["backend_mode"])
    config = replace(config, backend=backend)
    if overrides.get("metric"):
        config = replace(config, metric_kind=_metric(overrides["metric"]))
    if overrides.get("tie_rule"):
        config = replace(config, tie_rule=_tie_rule(overrides["tie_rule"]))
    if overrides.get("show_low") is not None:
        config = replace(config, show_low=bool(overrides["show_low"]))
    if overrides.get("explain") is not None:
        config = replace(config, explain=bool(overrides["explain"]))
    if overrides.get("concurrency"):
        config = replace(config, concurrency_limit=int(overrides["concurrency"]))
    return config
