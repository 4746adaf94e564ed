"""Command-line interface.

Exit codes: 0 success, 1 analysis error, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import TOOL_NAME, __version__
from .backends import ExplanationStatus, make_backend
from .config import load_config
from .errors import SecritError
from .metrics import MetricKind
from .pipeline import run_analysis
from .prompts import build_prompt
from .backends import ExplanationJob, generate
from .report import build_report, render_report
from .service import serve


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Flag potentially security-critical methods and explain why.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze a project tree and print a report")
    analyze.add_argument("path", type=Path)
    analyze.add_argument("--metric", choices=[k.value for k in MetricKind])
    analyze.add_argument("--format", choices=["text", "json", "sarif"], default="text")
    analyze.add_argument("--show-low", action="store_true", default=None)
    analyze.add_argument("--explain", action="store_true", default=None)
    analyze.add_argument("--backend", choices=["live", "mock"], dest="backend_mode")
    analyze.add_argument("--top", type=int, metavar="N", help="text view: show only the first N rows")
    analyze.add_argument("--tie-rule", dest="tie_rule")

    explain = sub.add_parser("explain", help="explain one method of a project")
    explain.add_argument("path", type=Path)
    explain.add_argument("--method", required=True, metavar="FQN")
    explain.add_argument("--metric", choices=[k.value for k in MetricKind])
    explain.add_argument("--backend", choices=["live", "mock"], dest="backend_mode")

    config = sub.add_parser("config", help="configuration utilities")
    config_sub = config.add_subparsers(dest="config_command", required=True)
    check = config_sub.add_parser("check", help="load and validate the tool configuration")
    check.add_argument("path", nargs="?", type=Path, default=Path("."))

    serve_cmd = sub.add_parser("serve", help="run the analysis service on stdio")
    serve_cmd.add_argument("--project", type=Path, default=None)
    return parser


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = load_config(
        args.path,
        {
            "metric": args.metric,
            "show_low": args.show_low,
            "explain": args.explain,
            "backend_mode": args.backend_mode,
            "tie_rule": args.tie_rule,
        },
    )
    want_explanations = bool(args.explain)
    run = run_analysis(args.path, config, with_explanations=want_explanations)
    for diag in run.diagnostics:
        print(f"warning: {diag.path}: {diag.message}", file=sys.stderr)
    generated_at = None
    if args.format == "text":
        generated_at = time.strftime("%Y-%m-%d %H:%M:%S")
    report = build_report(
        args.path,
        config.metric_kind,
        config.tie_rule.value,
        run.assessments,
        explanations=run.explanations,
        generated_at=generated_at,
    )
    out = render_report(report, args.format, show_low=config.show_low, top=args.top)
    sys.stdout.buffer.write(out)
    return 0


def _cmd_explain(args: argparse.Namespace) -> int:
    config = load_config(
        args.path, {"metric": args.metric, "backend_mode": args.backend_mode}
    )
    run = run_analysis(args.path, config)
    target = next((a for a in run.assessments if a.fqn == args.method), None)
    if target is None:
        print(
            f"error: method {args.method!r} is not part of this assessment "
            "(unknown, abstract, or zero-valued)",
            file=sys.stderr,
        )
        return 1
    backend = make_backend(config.backend)
    prompt = build_prompt(target.record.method, target.record.kind, target.value)
    result = generate(ExplanationJob(assessment=target, prompt=prompt), backend)
    level = target.level.label if target.level else "Unranked"
    print(f"{target.fqn}")
    print(f"{target.record.kind.display_name} = {target.value} | {level} | rank {target.rank}")
    if result.status is ExplanationStatus.READY:
        print(f"\n{result.why_critical}\n")
        for i, step in enumerate(result.precautions, 1):
            print(f"{i}. {step}")
        return 0
    print(f"\nexplanation failed: {result.failure_reason}: {result.message}", file=sys.stderr)
    return 1


def _cmd_config_check(args: argparse.Namespace) -> int:
    config = load_config(args.path)
    print(f"configuration for {args.path.resolve()}")
    print(f"  metric:      {config.metric_kind.value}")
    print(f"  tie rule:    {config.tie_rule.value}")
    print(f"  show low:    {config.show_low}")
    print(f"  explain:     {config.explain}")
    print(f"  concurrency: {config.concurrency_limit}")
    print(f"  backend:     {config.backend.mode}")
    if config.backend.mode == "live":
        print(f"  endpoint:    {config.backend.endpoint_url}")
        print(f"  model:       {config.backend.model_name}")
        print(f"  api key env: {config.backend.api_key_env}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "explain":
            return _cmd_explain(args)
        if args.command == "config":
            return _cmd_config_check(args)
        if args.command == "serve":
            return serve(args.project)
    except SecritError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
