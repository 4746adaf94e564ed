"""Ranking and level assignment: filter zero values, sort descending, and
group into High/Medium/Low with quantile-based equal-frequency binning.

Cut points sit at the 1/3 and 2/3 nearest-rank quantiles. Ties dominate
real metric data (a project's CC values are mostly 1), and a tie group must
never be split across levels, so the tie rule decides how groups interact
with the cuts:

* ``strict-threshold`` takes the quantiles of the raw value multiset and
  compares values directly (High: v > q_hi; Medium: q_lo < v <= q_hi;
  Low: v <= q_lo). Massive tie groups can swallow both cuts, collapsing
  the Medium level entirely.
* ``ties-join-lower-bin`` and ``ties-join-higher-bin`` take the quantiles
  of the distinct value set, so a tie group always sits wholly on one side
  of a boundary; the group holding the cut value joins the lower or the
  higher level respectively.

On all-distinct values every rule degenerates to plain equal-frequency
thirds (bin sizes differing by at most 1). The calibrated default is
``ties-join-lower-bin``: it is the variant that reproduces the reference
corpus level distributions for all three metrics.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import EmptyInput
from .metrics import MetricKind, MetricRecord
from .model import ClassModel


class CriticalityLevel(enum.IntEnum):
    LOW = 1
    MEDIUM = 2
    HIGH = 3

    @property
    def label(self) -> str:
        return {self.LOW: "Low", self.MEDIUM: "Medium", self.HIGH: "High"}[self]

    @classmethod
    def from_label(cls, label: str) -> "CriticalityLevel":
        return {"Low": cls.LOW, "Medium": cls.MEDIUM, "High": cls.HIGH}[label]


class TieRule(enum.Enum):
    STRICT_THRESHOLD = "strict-threshold"
    TIES_JOIN_LOWER = "ties-join-lower-bin"
    TIES_JOIN_HIGHER = "ties-join-higher-bin"


DEFAULT_TIE_RULE = TieRule.TIES_JOIN_LOWER


@dataclass(frozen=True)
class CriticalityAssessment:
    record: MetricRecord
    rank: int
    level: CriticalityLevel | None = None
    cuts: tuple[float, float] | None = None  # (q_lo, q_hi)
    tie_rule: str | None = None

    @property
    def fqn(self) -> str:
        return self.record.fqn

    @property
    def value(self) -> int:
        return self.record.value


@dataclass(frozen=True)
class AssessmentConfig:
    metric_kind: MetricKind = MetricKind.LOC
    tie_rule: TieRule = DEFAULT_TIE_RULE
    show_low: bool = False


def filter_nonzero(records: list[MetricRecord]) -> list[MetricRecord]:
    """Zero suggests non-criticality; only positive values are assessed."""
    return [r for r in records if r.value > 0]


def rank_descending(records: list[MetricRecord]) -> list[CriticalityAssessment]:
    """Stable descending sort by value, ties broken by ascending fqn."""
    ordered = sorted(records, key=lambda r: (-r.value, r.fqn))
    return [CriticalityAssessment(record=r, rank=i + 1) for i, r in enumerate(ordered)]


def _nearest_rank(sorted_asc: list[int], fraction: float) -> float:
    """Nearest-rank quantile of an ascending list (1-based ceil index)."""
    n = len(sorted_asc)
    idx = max(1, math.ceil(fraction * n))
    return float(sorted_asc[min(idx, n) - 1])


def _cuts_for(values: list[int], tie_rule: TieRule) -> tuple[float, float]:
    asc = sorted(values)
    if tie_rule is TieRule.STRICT_THRESHOLD:
        return _nearest_rank(asc, 1 / 3), _nearest_rank(asc, 2 / 3)
    distinct = sorted(set(asc))
    k = len(distinct)
    if tie_rule is TieRule.TIES_JOIN_LOWER:
        lo_idx = math.ceil(k / 3)
        hi_idx = math.ceil(2 * k / 3)
    else:  # TIES_JOIN_HIGHER: boundary groups shift up one bin
        lo_idx = math.ceil((k + 1) / 3)
        hi_idx = math.ceil((2 * k + 1) / 3)
    lo_idx = min(max(lo_idx, 1), k)
    hi_idx = min(max(hi_idx, 1), k)
    return float(distinct[lo_idx - 1]), float(distinct[hi_idx - 1])


def _level_for(value: float, cuts: tuple[float, float], tie_rule: TieRule) -> CriticalityLevel:
    q_lo, q_hi = cuts
    if tie_rule is TieRule.TIES_JOIN_HIGHER:
        if value >= q_hi:
            return CriticalityLevel.HIGH
        if value >= q_lo:
            return CriticalityLevel.MEDIUM
        return CriticalityLevel.LOW
    # strict-threshold and ties-join-lower: the cut value belongs below
    if value > q_hi:
        return CriticalityLevel.HIGH
    if value > q_lo:
        return CriticalityLevel.MEDIUM
    return CriticalityLevel.LOW


def bin_levels(
    ranked: list[CriticalityAssessment], tie_rule: TieRule = DEFAULT_TIE_RULE
) -> list[CriticalityAssessment]:
    """Assign levels to a rank-ordered assessment list.

    With one or two records the result is conservative: the top record is
    High, a second record with a strictly smaller value is Medium (equal
    values share the High level, as ties always share levels).
    """
    if not ranked:
        raise EmptyInput("bin_levels requires at least one assessment")
    values = [a.value for a in ranked]
    cuts = _cuts_for(values, tie_rule)
    if len(ranked) < 3:
        levels = [CriticalityLevel.HIGH]
        if len(ranked) == 2:
            second = (
                CriticalityLevel.HIGH
                if ranked[1].value == ranked[0].value
                else CriticalityLevel.MEDIUM
            )
            levels.append(second)
        return [
            replace(a, level=lv, cuts=cuts, tie_rule=tie_rule.value)
            for a, lv in zip(ranked, levels)
        ]
    return [
        replace(a, level=_level_for(a.value, cuts, tie_rule), cuts=cuts, tie_rule=tie_rule.value)
        for a in ranked
    ]


def assess(
    classes: list[ClassModel],
    kind: MetricKind,
    config: AssessmentConfig | None = None,
) -> list[CriticalityAssessment]:
    """attribute -> filter zeros -> rank -> bin; one metric per run."""
    from .metrics import attribute_metric

    cfg = config or AssessmentConfig(metric_kind=kind)
    records = filter_nonzero(attribute_metric(classes, kind))
    if not records:
        return []
    return bin_levels(rank_descending(records), cfg.tie_rule)


def assess_records(
    records: list[MetricRecord], tie_rule: TieRule = DEFAULT_TIE_RULE
) -> list[CriticalityAssessment]:
    """Same pipeline starting from precomputed records (oracle replays)."""
    kept = filter_nonzero(records)
    if not kept:
        return []
    return bin_levels(rank_descending(kept), tie_rule)


def level_counts(assessments: list[CriticalityAssessment]) -> dict[str, int]:
    counts = {"High": 0, "Medium": 0, "Low": 0}
    for a in assessments:
        if a.level is not None:
            counts[a.level.label] += 1
    return counts
