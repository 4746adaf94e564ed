"""End-to-end analysis runs shared by the CLI and the service."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .backends import ExplanationResult, make_backend
from .config import ToolConfig
from .criticality import CriticalityAssessment, assess, AssessmentConfig
from .metrics import MetricKind
from .model import ClassModel, Diagnostic
from .scheduler import explain_all
from .sources import load_project


@dataclass
class AnalysisRun:
    classes: list[ClassModel]
    assessments: list[CriticalityAssessment]
    diagnostics: list[Diagnostic]
    explanations: dict[str, ExplanationResult] | None = None


def run_analysis(
    root: Path,
    config: ToolConfig,
    metric: MetricKind | None = None,
    classes: list[ClassModel] | None = None,
    with_explanations: bool = False,
    backend=None,
) -> AnalysisRun:
    kind = metric or config.metric_kind
    diagnostics: list[Diagnostic] = []
    if classes is None:
        classes, diagnostics = load_project(root)
    assessments = assess(
        classes, kind, AssessmentConfig(metric_kind=kind, tie_rule=config.tie_rule)
    )
    explanations = None
    if with_explanations and config.explain and assessments:
        if backend is None:
            backend = make_backend(config.backend)
        explanations = explain_all(
            assessments,
            config.backend,
            concurrency_limit=config.concurrency_limit,
            project_root=root,
            backend=backend,
        )
    return AnalysisRun(
        classes=classes,
        assessments=assessments,
        diagnostics=diagnostics,
        explanations=explanations,
    )
