"""Prompt construction and response-format contract for explanations.

The system prompt is a fixed constant; the user prompt embeds the method
body verbatim plus exactly one metric line. Responses must come back in two
labeled sections (WHY_CRITICAL / PRECAUTIONS) so they can be displayed
structurally.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .errors import EmptyBody
from .metrics import MetricKind
from .model import MethodUnit

SYSTEM_PROMPT_CORE = (
    "You are an assistant with expertise in explaining the security criticality "
    "of software in regard to the system's confidentiality, integrity, and "
    "availability. For a given code snippet, you will be provided with the name "
    "of a software metric that measures its criticality, the interpretation of "
    "the metric value, and the value of the metric. One of the following metrics "
    "will be provided: cyclomatic complexity, lines of code, or lack of cohesion "
    "of methods. Your task is to explain why the code snippet is security "
    "critical using the provided metric and give steps to prevent possible "
    "security exploits due to mistakes in the code snippet."
)

RESPONSE_GUIDELINES = (
    "\n\n"
    "Guidelines and response format:\n"
    "- Answer in exactly two labeled sections, in this order.\n"
    "- WHY_CRITICAL: at most 120 words explaining the security relevance of "
    "this specific snippet in terms of the provided metric.\n"
    "- PRECAUTIONS: 3 to 7 numbered steps, one per line, each a concrete "
    "preventive action for this snippet.\n"
    "- Ground every statement in the snippet; do not give generic advice that "
    "ignores the code shown."
)

SYSTEM_PROMPT = SYSTEM_PROMPT_CORE + RESPONSE_GUIDELINES

USER_PROMPT_TASK = (
    "Explain why the code snippet is security critical based on the metric "
    "and provide concise steps to prevent security exploits."
)

PLACEHOLDER_TEXT = "Generating explanation, please wait"


@dataclass(frozen=True)
class PromptPair:
    system_prompt: str
    user_prompt: str

    @property
    def prompt_hash(self) -> str:
        digest = hashlib.sha256()
        digest.update(self.system_prompt.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(self.user_prompt.encode("utf-8"))
        return digest.hexdigest()


def format_metric_value(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return str(value)


def build_prompt(method: MethodUnit, kind: MetricKind, value: float) -> PromptPair:
    if not method.body_text.strip():
        raise EmptyBody(method.fqn)
    user = (
        f"{USER_PROMPT_TASK}\n"
        f"Code Snippet:\n{method.body_text}\n"
        f"Metric: {kind.display_name} ({kind.interpretation}): {format_metric_value(value)}"
    )
    return PromptPair(system_prompt=SYSTEM_PROMPT, user_prompt=user)


_WHY_RE = re.compile(r"WHY_CRITICAL:\s*(.*?)(?=PRECAUTIONS:)", re.DOTALL)
_PREC_RE = re.compile(r"PRECAUTIONS:\s*(.*)", re.DOTALL)
_STEP_RE = re.compile(r"^\s*(?:\d+[.)]\s*|[-*]\s+)(.+)$")


def parse_explanation(content: str) -> tuple[str, list[str]]:
    """Split a backend reply into (why_critical, precaution steps).

    Raises ValueError when either labeled section is missing or empty;
    callers map that to a MalformedResponse failure.
    """
    why_match = _WHY_RE.search(content)
    prec_match = _PREC_RE.search(content)
    if not why_match or not prec_match:
        raise ValueError("response is missing WHY_CRITICAL or PRECAUTIONS section")
    why = why_match.group(1).strip()
    steps: list[str] = []
    for line in prec_match.group(1).strip().splitlines():
        m = _STEP_RE.match(line)
        if m:
            steps.append(m.group(1).strip())
        elif line.strip() and steps:
            steps[-1] = steps[-1] + " " + line.strip()
    if not why or not steps:
        raise ValueError("response has empty WHY_CRITICAL or PRECAUTIONS content")
    return why, steps
