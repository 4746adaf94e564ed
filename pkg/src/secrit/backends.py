"""Explanation backends: a chat-completion HTTP client and an offline mock.

The live backend speaks the common chat-completions wire shape (system/user
message roles, choices[0].message.content) against any compatible endpoint.
The mock backend is deterministic and needs no network, which keeps the
whole pipeline runnable offline.
"""
from __future__ import annotations

import enum
import os
import time
from dataclasses import dataclass, field

import requests

from .criticality import CriticalityAssessment
from .prompts import PLACEHOLDER_TEXT, PromptPair, parse_explanation

DEFAULT_API_KEY_ENV = "SECRIT_API_KEY"


class ExplanationStatus(enum.Enum):
    PENDING = "Pending"
    READY = "Ready"
    FAILED = "Failed"


class FailureReason(enum.Enum):
    BACKEND_UNREACHABLE = "BackendUnreachable"
    AUTH_FAILURE = "AuthFailure"
    MALFORMED_RESPONSE = "MalformedResponse"


@dataclass(frozen=True)
class BackendConfig:
    """How to reach the chat-completion service.

    The API key itself is never stored; only the environment variable name
    that holds it.
    """

    endpoint_url: str = ""
    model_name: str = "gpt-5-2025-08-07"
    api_key_env: str = DEFAULT_API_KEY_ENV
    temperature: float | None = 0.0
    reasoning_effort: str | None = None
    timeout: float = 30.0
    max_retries: int = 2
    mode: str = "mock"  # "mock" or "live"


@dataclass(frozen=True)
class ExplanationResult:
    status: ExplanationStatus
    why_critical: str | None = None
    precautions: tuple[str, ...] = ()
    model: str = ""
    prompt_hash: str = ""
    elapsed: float = 0.0
    message: str = ""  # placeholder text while Pending, error text when Failed
    failure_reason: str | None = None

    @classmethod
    def pending(cls, model: str, prompt_hash: str) -> "ExplanationResult":
        return cls(
            status=ExplanationStatus.PENDING,
            model=model,
            prompt_hash=prompt_hash,
            message=PLACEHOLDER_TEXT,
        )


@dataclass(frozen=True)
class ExplanationJob:
    assessment: CriticalityAssessment
    prompt: PromptPair

    @property
    def fqn(self) -> str:
        return self.assessment.fqn

    @property
    def priority_key(self) -> tuple[int, int]:
        level = self.assessment.level
        return (-(level.value if level else 0), self.assessment.rank)


class MockBackend:
    """Deterministic template backend for tests and offline demos."""

    model_name = "mock-explainer-v1"

    def __init__(self):
        self.calls: list[str] = []  # fqn per dispatch, in call order

    def complete(self, job: ExplanationJob) -> str:
        self.calls.append(job.fqn)
        a = job.assessment
        level = a.level.label if a.level else "Unranked"
        kind = a.record.kind.display_name
        return (
            f"WHY_CRITICAL: Method {job.fqn} has {kind} of "
            f"{a.value}, placing it at criticality level {level} (rank {a.rank}) "
            "within this project. The measured structure makes incorrect changes "
            "easier to introduce and harder to review, so defects here are more "
            "likely to weaken confidentiality, integrity, or availability.\n"
            "PRECAUTIONS:\n"
            "1. Validate and sanitize every external input this method consumes "
            "before it reaches sensitive operations.\n"
            "2. Add focused unit tests around each decision path and boundary "
            "condition in this method.\n"
            "3. Refactor the method into smaller, single-purpose units and have "
            "the change security-reviewed.\n"
        )


class HttpBackend:
    """Chat-completion client with bounded retries and backoff."""

    TRANSIENT_STATUS = {429, 500, 502, 503, 504}

    def __init__(self, config: BackendConfig, sleeper=time.sleep):
        self.config = config
        self.model_name = config.model_name
        self._sleep = sleeper

    def complete(self, job: ExplanationJob) -> str:
        cfg = self.config
        api_key = os.environ.get(cfg.api_key_env, "")
        headers = {"Content-Type": "application/json"}
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        payload: dict = {
            "model": cfg.model_name,
            "messages": [
                {"role": "system", "content": job.prompt.system_prompt},
                {"role": "user", "content": job.prompt.user_prompt},
            ],
        }
        if cfg.temperature is not None:
            payload["temperature"] = cfg.temperature
        if cfg.reasoning_effort is not None:
            payload["reasoning_effort"] = cfg.reasoning_effort

        last_error: Exception | None = None
        for attempt in range(cfg.max_retries + 1):
            if attempt:
                self._sleep(min(2 ** (attempt - 1), 30))
            try:
                response = requests.post(
                    cfg.endpoint_url, json=payload, headers=headers, timeout=cfg.timeout
                )
            except requests.RequestException as exc:
                last_error = BackendUnreachableError(str(exc))
                continue
            if response.status_code in (401, 403):
                raise AuthFailureError(f"authentication rejected ({response.status_code})")
            if response.status_code in self.TRANSIENT_STATUS:
                last_error = BackendUnreachableError(
                    f"transient HTTP {response.status_code} from backend"
                )
                continue
            if response.status_code != 200:
                raise MalformedResponseError(f"unexpected HTTP {response.status_code}")
            try:
                body = response.json()
                return body["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise MalformedResponseError(f"cannot read completion: {exc}") from exc
        raise last_error if last_error else BackendUnreachableError("no attempt made")


class BackendUnreachableError(Exception):
    reason = FailureReason.BACKEND_UNREACHABLE


class AuthFailureError(Exception):
    reason = FailureReason.AUTH_FAILURE


class MalformedResponseError(Exception):
    reason = FailureReason.MALFORMED_RESPONSE


def make_backend(config: BackendConfig):
    return MockBackend() if config.mode == "mock" else HttpBackend(config)


def generate(job: ExplanationJob, backend) -> ExplanationResult:
    """Run one job against a backend and normalize the outcome."""
    started = time.monotonic()
    prompt_hash = job.prompt.prompt_hash
    model = getattr(backend, "model_name", "unknown")
    deterministic = isinstance(backend, MockBackend)
    try:
        content = backend.complete(job)
    except (BackendUnreachableError, AuthFailureError, MalformedResponseError) as exc:
        return ExplanationResult(
            status=ExplanationStatus.FAILED,
            model=model,
            prompt_hash=prompt_hash,
            elapsed=0.0 if deterministic else time.monotonic() - started,
            message=str(exc),
            failure_reason=exc.reason.value,
        )
    try:
        why, steps = parse_explanation(content)
    except ValueError as exc:
        return ExplanationResult(
            status=ExplanationStatus.FAILED,
            model=model,
            prompt_hash=prompt_hash,
            elapsed=0.0 if deterministic else time.monotonic() - started,
            message=str(exc),
            failure_reason=FailureReason.MALFORMED_RESPONSE.value,
        )
    return ExplanationResult(
        status=ExplanationStatus.READY,
        why_critical=why,
        precautions=tuple(steps),
        model=model,
        prompt_hash=prompt_hash,
        elapsed=0.0 if deterministic else time.monotonic() - started,
    )
