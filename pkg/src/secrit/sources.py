"""Project scanning and source-model construction."""
from __future__ import annotations

import fnmatch
import os
from pathlib import Path

from .errors import ParseFailure, RootNotFound
from .javaparse import GRAMMAR_ADAPTERS
from .model import ClassModel, Diagnostic, MethodUnit, SourceFile

DEFAULT_INCLUDE = ["**/*.java"]
DEFAULT_EXCLUDE = ["**/target/**", "**/build/**", "**/test/**"]


def _matches(rel_posix: str, patterns: list[str]) -> bool:
    for pat in patterns:
        if fnmatch.fnmatch(rel_posix, pat):
            return True
        # `**/x/**` should also match when x is a leading component
        if pat.startswith("**/") and fnmatch.fnmatch(rel_posix, pat[3:]):
            return True
    return False


def scan_project(
    root: Path,
    include_globs: list[str] | None = None,
    exclude_globs: list[str] | None = None,
    language_tag: str = "java",
) -> tuple[list[SourceFile], list[Diagnostic]]:
    """Deterministic, lexicographically ordered scan of matching files.

    Symlinked directories are not followed, so cycles cannot recurse.
    Unreadable files are collected as diagnostics, never fatal.
    """
    root = Path(root)
    if not root.is_dir():
        raise RootNotFound(str(root))
    include = include_globs if include_globs is not None else DEFAULT_INCLUDE
    exclude = exclude_globs if exclude_globs is not None else DEFAULT_EXCLUDE

    matched: list[Path] = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames.sort()
        for name in sorted(filenames):
            path = Path(dirpath) / name
            rel = path.relative_to(root).as_posix()
            if _matches(rel, include) and not _matches(rel, exclude):
                matched.append(path)
    matched.sort(key=lambda p: p.relative_to(root).as_posix())

    files: list[SourceFile] = []
    diagnostics: list[Diagnostic] = []
    for path in matched:
        try:
            data = path.read_bytes()
        except OSError as exc:
            diagnostics.append(Diagnostic(path, f"unreadable: {exc}"))
            continue
        files.append(SourceFile.from_bytes(path, data, language_tag))
    return files, diagnostics


def parse_source(file: SourceFile, content: bytes) -> tuple[list[ClassModel], list[Diagnostic]]:
    """One ClassModel per class declaration found in the file.

    Raises ParseFailure only when the file plainly contains declarations
    but none could be recovered.
    """
    adapter = GRAMMAR_ADAPTERS.get(file.language_tag)
    if adapter is None:
        raise ParseFailure(f"no grammar adapter for {file.language_tag!r}")
    classes, messages = adapter(file, content)
    diagnostics = [Diagnostic(file.path, m) for m in messages]
    if not classes:
        text = content.decode("utf-8", errors="replace")
        if any(kw in text for kw in ("class ", "interface ", "enum ", "record ")) and messages:
            raise ParseFailure(f"{file.path}: no declaration recovered")
    return classes, diagnostics


def extract_methods(classes: list[ClassModel]) -> list[MethodUnit]:
    """All concrete methods, flattened in class order."""
    out: list[MethodUnit] = []
    for cls in classes:
        out.extend(cls.concrete_methods())
    return out


def load_project(
    root: Path,
    include_globs: list[str] | None = None,
    exclude_globs: list[str] | None = None,
) -> tuple[list[ClassModel], list[Diagnostic]]:
    """scan + parse in one step; the entry point the pipeline uses."""
    files, diagnostics = scan_project(root, include_globs, exclude_globs)
    classes: list[ClassModel] = []
    for f in files:
        try:
            data = Path(f.path).read_bytes()
        except OSError as exc:
            diagnostics.append(Diagnostic(f.path, f"unreadable: {exc}"))
            continue
        try:
            parsed, diags = parse_source(f, data)
        except ParseFailure as exc:
            diagnostics.append(Diagnostic(f.path, f"parse failure: {exc}"))
            continue
        classes.extend(parsed)
        diagnostics.extend(diags)
    _check_fqn_uniqueness(classes, diagnostics)
    return classes, diagnostics


def _check_fqn_uniqueness(classes: list[ClassModel], diagnostics: list[Diagnostic]) -> None:
    seen: dict[str, str] = {}
    for cls in classes:
        for m in cls.methods:
            if m.fqn in seen:
                diagnostics.append(
                    Diagnostic(m.file.path, f"fqn collision: {m.fqn} also in {seen[m.fqn]}")
                )
            else:
                seen[m.fqn] = str(m.file.path)
