"""Domain model for scanned and parsed source code.

All values are immutable after construction so parsing can run per file in
parallel and downstream stages can share them freely.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path


def content_digest(data: bytes) -> str:
    """256-bit content hash used for file identity and cache keys."""
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class SourceFile:
    """One file of the analyzed corpus."""

    path: Path
    language_tag: str
    content_hash: str
    line_count: int

    @classmethod
    def from_bytes(cls, path: Path, data: bytes, language_tag: str = "java") -> "SourceFile":
        text = data.decode("utf-8", errors="replace")
        # splitlines() drops a trailing final newline, matching editor line counts
        return cls(
            path=path,
            language_tag=language_tag,
            content_hash=content_digest(data),
            line_count=len(text.splitlines()),
        )


@dataclass(frozen=True)
class MethodUnit:
    """One analyzed method: the unit the whole pipeline ranks and explains.

    fqn is `ClassName.methodName(paramTypes)` with nested classes joined by
    dots; the parameter-type signature disambiguates overloads. span is
    1-based and inclusive, and body_text is byte-identical to the file slice
    it covers.
    """

    fqn: str
    file: SourceFile
    span: tuple[int, int]
    body_text: str
    is_concrete: bool

    @property
    def start_line(self) -> int:
        return self.span[0]

    @property
    def end_line(self) -> int:
        return self.span[1]


@dataclass(frozen=True)
class ClassModel:
    """One parsed class with the field-access sets that feed cohesion."""

    qualified_name: str
    file: SourceFile
    fields: frozenset[str]
    methods: tuple[MethodUnit, ...]
    field_access: dict[str, frozenset[str]] = field(hash=False, default_factory=dict)

    def concrete_methods(self) -> tuple[MethodUnit, ...]:
        return tuple(m for m in self.methods if m.is_concrete)


@dataclass(frozen=True)
class Diagnostic:
    """Non-fatal problem reported while scanning or parsing."""

    path: Path
    message: str
