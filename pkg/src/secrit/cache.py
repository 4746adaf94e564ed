"""Persistent explanation cache, one content-addressed file per key.

Keyed on (body digest, metric kind, value, model, prompt hash): editing a
method body, switching metric or model, or changing the prompt template all
invalidate naturally. Only Ready results are stored.
"""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .backends import ExplanationResult, ExplanationStatus

CACHE_VERSION = 1
STATE_DIR_ENV = "SECRIT_STATE_DIR"


def state_dir(project_root: Path) -> Path:
    override = os.environ.get(STATE_DIR_ENV)
    if override:
        return Path(override)
    return Path(project_root) / ".secrit"


def cache_key(body_digest: str, kind: str, value: float, model: str, prompt_hash: str) -> str:
    raw = "|".join([body_digest, kind, repr(value), model, prompt_hash])
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()


class ExplanationCache:
    def __init__(self, directory: Path):
        self.directory = Path(directory)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def lookup(self, key: str) -> ExplanationResult | None:
        path = self._path(key)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None
        except (OSError, ValueError):
            self._discard(path)
            return None
        if not isinstance(payload, dict) or payload.get("cacheVersion") != CACHE_VERSION:
            self._discard(path)
            return None
        entry = payload.get("result")
        try:
            return ExplanationResult(
                status=ExplanationStatus(entry["status"]),
                why_critical=entry["whyCritical"],
                precautions=tuple(entry["precautions"]),
                model=entry["model"],
                prompt_hash=entry["promptHash"],
                elapsed=float(entry["elapsed"]),
            )
        except (KeyError, TypeError, ValueError):
            self._discard(path)
            return None

    def store(self, key: str, result: ExplanationResult) -> None:
        if result.status is not ExplanationStatus.READY:
            return  # only completed explanations are worth persisting
        self.directory.mkdir(parents=True, exist_ok=True)
        payload = {
            "cacheVersion": CACHE_VERSION,
            "result": {
                "status": result.status.value,
                "whyCritical": result.why_critical,
                "precautions": list(result.precautions),
                "model": result.model,
                "promptHash": result.prompt_hash,
                "elapsed": result.elapsed,
            },
        }
        tmp = self._path(key).with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
        os.replace(tmp, self._path(key))

    def _discard(self, path: Path) -> None:
        try:
            path.unlink()
        except OSError:
            pass
