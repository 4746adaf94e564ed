"""Explanation scheduling: placeholder-first, criticality order, bounded
concurrency.

Every assessed method immediately gets a Pending event carrying the
placeholder text; generation jobs are then dispatched strictly by
(level descending, rank ascending) on a worker pool, and each completion
is streamed as a Ready or Failed event.
"""
from __future__ import annotations

import queue
import threading
from collections.abc import Iterator
from pathlib import Path

from .backends import (
    BackendConfig,
    ExplanationJob,
    ExplanationResult,
    generate,
    make_backend,
)
from .cache import ExplanationCache, cache_key
from .criticality import CriticalityAssessment
from .model import content_digest
from .prompts import build_prompt


def build_jobs(assessments: list[CriticalityAssessment]) -> list[ExplanationJob]:
    jobs = [
        ExplanationJob(
            assessment=a,
            prompt=build_prompt(a.record.method, a.record.kind, a.value),
        )
        for a in assessments
    ]
    jobs.sort(key=lambda j: j.priority_key)
    return jobs


def schedule(
    assessments: list[CriticalityAssessment],
    backend_config: BackendConfig,
    concurrency_limit: int = 1,
    cache: ExplanationCache | None = None,
    backend=None,
) -> Iterator[tuple[str, ExplanationResult]]:
    """Yield (fqn, result) events: all Pendings first, then completions.

    Pass an explicit backend to share one instance (the service does, so
    hover state and dispatch logs line up); otherwise one is built from the
    config.
    """
    if concurrency_limit < 1:
        raise ValueError("concurrency_limit must be >= 1")
    if backend is None:
        backend = make_backend(backend_config)
    jobs = build_jobs(assessments)

    for job in jobs:
        yield job.fqn, ExplanationResult.pending(
            model=getattr(backend, "model_name", "unknown"), prompt_hash=job.prompt.prompt_hash
        )
    if not jobs:
        return

    def job_key(job: ExplanationJob) -> str:
        method = job.assessment.record.method
        return cache_key(
            content_digest(method.body_text.encode("utf-8")),
            job.assessment.record.kind.value,
            job.assessment.value,
            getattr(backend, "model_name", "unknown"),
            job.prompt.prompt_hash,
        )

    events: queue.Queue[tuple[str, ExplanationResult]] = queue.Queue()
    pending_jobs = queue.SimpleQueue()
    for job in jobs:
        pending_jobs.put(job)

    def worker() -> None:
        while True:
            try:
                job = pending_jobs.get_nowait()
            except queue.Empty:
                return
            if cache is not None:
                hit = cache.lookup(job_key(job))
                if hit is not None:
                    events.put((job.fqn, hit))
                    continue
            result = generate(job, backend)
            if cache is not None:
                cache.store(job_key(job), result)
            events.put((job.fqn, result))

    workers = [
        threading.Thread(target=worker, daemon=True)
        for _ in range(min(concurrency_limit, len(jobs)))
    ]
    for t in workers:
        t.start()
    delivered = 0
    while delivered < len(jobs):
        fqn, result = events.get()
        delivered += 1
        yield fqn, result
    for t in workers:
        t.join()


def explain_all(
    assessments: list[CriticalityAssessment],
    backend_config: BackendConfig,
    concurrency_limit: int = 1,
    project_root: Path | None = None,
    backend=None,
) -> dict[str, ExplanationResult]:
    """Run the scheduler to completion; the final state per method."""
    from .cache import state_dir

    cache = None
    if project_root is not None:
        cache = ExplanationCache(state_dir(project_root) / "cache")
    results: dict[str, ExplanationResult] = {}
    for fqn, result in schedule(
        assessments, backend_config, concurrency_limit, cache=cache, backend=backend
    ):
        results[fqn] = result
    return results
