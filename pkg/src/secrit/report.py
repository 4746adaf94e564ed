"""Project reports: text tables for humans, versioned JSON and SARIF 2.1.0
for machines.

Machine formats always include all levels; show_low only filters the text
view. The JSON schema is stable and round-trips through parse_report.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import TOOL_NAME, __version__
from .backends import ExplanationResult, ExplanationStatus
from .criticality import CriticalityAssessment, CriticalityLevel
from .metrics import MetricKind

REPORT_SCHEMA_VERSION = "1"
SARIF_SCHEMA_URI = (
    "https://raw.githubusercontent.com/oasis-tcs/sarif-spec/master/Schemata/sarif-schema-2.1.0.json"
)

_SARIF_LEVELS = {
    CriticalityLevel.HIGH: "error",
    CriticalityLevel.MEDIUM: "warning",
    CriticalityLevel.LOW: "note",
}


@dataclass(frozen=True)
class ReportEntry:
    fqn: str
    file: str
    start_line: int
    end_line: int
    value: float
    rank: int
    level: str
    explanation_status: str = "NotRequested"
    why_critical: str | None = None
    precautions: tuple[str, ...] | None = None


@dataclass(frozen=True)
class ProjectReport:
    tool_version: str
    corpus_root: str
    metric: str
    tie_rule: str
    entries: tuple[ReportEntry, ...]
    generated_at: str | None = None  # text rendering only, never serialized

    def level_counts(self) -> dict[str, int]:
        counts = {"High": 0, "Medium": 0, "Low": 0}
        for e in self.entries:
            counts[e.level] += 1
        return counts


def build_report(
    corpus_root: Path,
    metric: MetricKind,
    tie_rule: str,
    assessments: list[CriticalityAssessment],
    explanations: dict[str, ExplanationResult] | None = None,
    generated_at: str | None = None,
) -> ProjectReport:
    entries = []
    for a in sorted(assessments, key=lambda x: x.rank):
        method = a.record.method
        try:
            rel = Path(method.file.path).relative_to(corpus_root).as_posix()
        except ValueError:
            rel = Path(method.file.path).as_posix()
        status = "NotRequested"
        why = None
        precautions = None
        if explanations is not None:
            result = explanations.get(a.fqn)
            if result is not None:
                status = result.status.value
                if result.status is ExplanationStatus.READY:
                    why = result.why_critical
                    precautions = result.precautions
        entries.append(
            ReportEntry(
                fqn=a.fqn,
                file=rel,
                start_line=method.start_line,
                end_line=method.end_line,
                value=a.value,
                rank=a.rank,
                level=a.level.label if a.level else "Unranked",
                explanation_status=status,
                why_critical=why,
                precautions=precautions,
            )
        )
    return ProjectReport(
        tool_version=f"{TOOL_NAME} {__version__}",
        corpus_root=str(corpus_root),
        metric=metric.value,
        tie_rule=tie_rule,
        entries=tuple(entries),
        generated_at=generated_at,
    )


def render_report(
    report: ProjectReport,
    fmt: str = "text",
    show_low: bool = False,
    top: int | None = None,
) -> bytes:
    if fmt == "json":
        return _render_json(report)
    if fmt == "sarif":
        return _render_sarif(report)
    if fmt == "text":
        return _render_text(report, show_low=show_low, top=top)
    raise ValueError(f"unknown report format {fmt!r}")


def _entry_dict(e: ReportEntry) -> dict:
    d = {
        "fqn": e.fqn,
        "file": e.file,
        "startLine": e.start_line,
        "endLine": e.end_line,
        "value": e.value,
        "rank": e.rank,
        "level": e.level,
        "explanationStatus": e.explanation_status,
    }
    if e.why_critical is not None:
        d["whyCritical"] = e.why_critical
    if e.precautions is not None:
        d["precautions"] = list(e.precautions)
    return d


def _render_json(report: ProjectReport) -> bytes:
    doc = {
        "version": REPORT_SCHEMA_VERSION,
        "tool": report.tool_version,
        "corpusRoot": report.corpus_root,
        "metric": report.metric,
        "tieRule": report.tie_rule,
        "entries": [_entry_dict(e) for e in report.entries],
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def parse_report(data: bytes) -> ProjectReport:
    doc = json.loads(data.decode("utf-8"))
    if doc.get("version") != REPORT_SCHEMA_VERSION:
        raise ValueError(f"unsupported report version {doc.get('version')!r}")
    entries = tuple(
        ReportEntry(
            fqn=e["fqn"],
            file=e["file"],
            start_line=e["startLine"],
            end_line=e["endLine"],
            value=e["value"],
            rank=e["rank"],
            level=e["level"],
            explanation_status=e.get("explanationStatus", "NotRequested"),
            why_critical=e.get("whyCritical"),
            precautions=tuple(e["precautions"]) if "precautions" in e else None,
        )
        for e in doc["entries"]
    )
    return ProjectReport(
        tool_version=doc["tool"],
        corpus_root=doc["corpusRoot"],
        metric=doc["metric"],
        tie_rule=doc["tieRule"],
        entries=entries,
    )


_BADGES = {"High": "[HIGH]", "Medium": "[MED ]", "Low": "[LOW ]"}


def _render_text(report: ProjectReport, show_low: bool, top: int | None) -> bytes:
    lines = []
    counts = report.level_counts()
    header = (
        f"{report.tool_version} | metric={report.metric} | tie-rule={report.tie_rule} | "
        f"High {counts['High']} / Medium {counts['Medium']} / Low {counts['Low']}"
    )
    lines.append(header)
    if report.generated_at:
        lines.append(f"generated at {report.generated_at}")
    lines.append(f"corpus: {report.corpus_root}")
    lines.append("")
    visible = [e for e in report.entries if show_low or e.level != "Low"]
    hidden_low = len(report.entries) - len(visible)
    truncated = 0
    if top is not None and top >= 0 and len(visible) > top:
        truncated = len(visible) - top
        visible = visible[:top]
    if visible:
        lines.append(f"{'rank':>4}  level   {'value':>7}  method")
        for e in visible:
            badge = _BADGES.get(e.level, e.level)
            value = int(e.value) if float(e.value).is_integer() else e.value
            lines.append(f"{e.rank:>4}  {badge}  {value:>7}  {e.fqn}  ({e.file}:{e.start_line})")
            if e.explanation_status != "NotRequested":
                if e.why_critical:
                    lines.append(f"      why: {e.why_critical}")
                    for i, step in enumerate(e.precautions or (), 1):
                        lines.append(f"      {i}. {step}")
                else:
                    lines.append(f"      explanation: {e.explanation_status}")
    else:
        lines.append("no methods to show")
    if truncated:
        lines.append(f"... {truncated} more row(s) beyond --top")
    if hidden_low:
        noun = "method" if hidden_low == 1 else "methods"
        lines.append(f"{hidden_low} low-criticality {noun} hidden (use --show-low to include)")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _render_sarif(report: ProjectReport) -> bytes:
    results = []
    for e in report.entries:
        message = f"{e.fqn}: {report.metric} = {e.value} (rank {e.rank}, {e.level} criticality)"
        if e.why_critical:
            message += f"\n{e.why_critical}"
            if e.precautions:
                steps = "\n".join(f"{i}. {s}" for i, s in enumerate(e.precautions, 1))
                message += f"\nPrecautions:\n{steps}"
        results.append(
            {
                "ruleId": f"secrit/{report.metric}",
                "level": _SARIF_LEVELS[CriticalityLevel.from_label(e.level)],
                "message": {"text": message},
                "locations": [
                    {
                        "physicalLocation": {
                            "artifactLocation": {"uri": e.file},
                            "region": {"startLine": e.start_line, "endLine": e.end_line},
                        }
                    }
                ],
            }
        )
    doc = {
        "version": "2.1.0",
        "$schema": SARIF_SCHEMA_URI,
        "runs": [
            {
                "tool": {
                    "driver": {
                        "name": TOOL_NAME,
                        "version": __version__,
                        "informationUri": "https://example.invalid/secrit",
                        "rules": [
                            {
                                "id": f"secrit/{report.metric}",
                                "shortDescription": {
                                    "text": f"Security-criticality by {report.metric}"
                                },
                            }
                        ],
                    }
                },
                "results": results,
            }
        ],
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")
