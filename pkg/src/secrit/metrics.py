"""The three code-level metrics: cyclomatic complexity, lines of code, and
lack of cohesion of methods (LCOM1), attributed per method.

Higher values indicate higher security criticality for all three kinds.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import NotConcrete, SpanOutOfRange
from .javaparse import build_masks, tokenize
from .model import ClassModel, MethodUnit

INTERPRETATION = "higher values indicate higher security criticality"


class MetricKind(enum.Enum):
    CC = "cc"
    LOC = "loc"
    LCOM = "lcom"

    @property
    def display_name(self) -> str:
        return {
            MetricKind.CC: "cyclomatic complexity",
            MetricKind.LOC: "lines of code",
            MetricKind.LCOM: "lack of cohesion of methods",
        }[self]

    @property
    def interpretation(self) -> str:
        return INTERPRETATION


@dataclass(frozen=True)
class MetricRecord:
    """(method, metric kind, value): the unit the pipeline ranks and bins."""

    method: MethodUnit
    kind: MetricKind
    value: int

    @property
    def fqn(self) -> str:
        return self.method.fqn


def compute_loc(method: MethodUnit, file_lines: list[str]) -> int:
    """Non-blank, non-comment lines within the method span.

    Lines consisting only of comments (or comment fragments of a block
    comment) do not count; string literal contents do.
    """
    start, end = method.span
    if start < 1 or end > len(file_lines) or start > end:
        raise SpanOutOfRange(f"{method.fqn}: span {method.span} outside 1..{len(file_lines)}")
    masked = build_masks("\n".join(file_lines)).comment_mask.splitlines()
    count = 0
    for line in masked[start - 1 : end]:
        if line.strip():
            count += 1
    return count


# Decision-point tokens: `while` covers both while and do-while loops,
# `case` excludes default labels, and `?` needs the generics guard below.
_DECISION_KEYWORDS = {"if", "for", "while", "case", "catch"}


def compute_cc(method: MethodUnit) -> int:
    """1 + decision points in the body (if/for/while/case/catch/?:/&&/||)."""
    if not method.is_concrete:
        raise NotConcrete(method.fqn)
    masks = build_masks(method.body_text)
    tokens = tokenize(masks.code_mask)
    cc = 1
    for idx, tok in enumerate(tokens):
        t = tok.text
        if t in _DECISION_KEYWORDS or t in ("&&", "||"):
            cc += 1
        elif t == "?":
            prev = tokens[idx - 1].text if idx > 0 else ""
            nxt = tokens[idx + 1].text if idx + 1 < len(tokens) else ""
            # skip generic wildcards: <?>, <? extends T>, Map<K, ? super V>
            if prev in ("<", ",") or nxt == ">":
                continue
            cc += 1
    return cc


def compute_lcom(cls: ClassModel) -> int:
    """LCOM1 over the class's concrete methods: max(P - Q, 0).

    P counts method pairs sharing no accessed field, Q pairs sharing at
    least one. Classes with fewer than two concrete methods score 0.
    """
    methods = cls.concrete_methods()
    if len(methods) < 2:
        return 0
    sets = [cls.field_access.get(m.fqn, frozenset()) for m in methods]
    p = q = 0
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if sets[i] & sets[j]:
                q += 1
            else:
                p += 1
    return max(p - q, 0)


def attribute_metric(classes: list[ClassModel], kind: MetricKind) -> list[MetricRecord]:
    """One record per concrete method.

    CC and LOC are the method's own values; LCOM carries the owning
    class's value onto each of its methods.
    """
    records: list[MetricRecord] = []
    for cls in classes:
        if kind is MetricKind.LCOM:
            value = compute_lcom(cls)
            for m in cls.concrete_methods():
                records.append(MetricRecord(m, kind, value))
            continue
        file_lines: list[str] | None = None
        for m in cls.concrete_methods():
            if kind is MetricKind.CC:
                records.append(MetricRecord(m, kind, compute_cc(m)))
            else:
                if file_lines is None:
                    file_lines = _read_lines(m)
                records.append(MetricRecord(m, kind, compute_loc(m, file_lines)))
    return records


def _read_lines(method: MethodUnit) -> list[str]:
    text = method.file.path.read_text(encoding="utf-8", errors="replace")
    return text.splitlines()
