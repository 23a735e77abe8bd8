from __future__ import annotations

from pathlib import Path
from typing import Any

from jinja2 import Environment, PackageLoader, StrictUndefined

from ..io import format_number
from ..reproducibility import package_version
from .checker import AuditResult


def _template_env() -> Environment:
    env = Environment(
        loader=PackageLoader("cvinfo_cli", "templates"),
        undefined=StrictUndefined,
        keep_trailing_newline=True,
    )
    env.filters["num"] = format_number
    return env


def audit_to_dict(result: AuditResult) -> dict[str, Any]:
    return {
        "partition": result.partition,
        "kind": result.kind.value,
        "passed": result.passed,
        "summary": {
            "total_warnings": len(result.warnings),
            "total_errors": len(result.errors),
        },
        "residuals": result.residuals,
        "warnings": result.warnings,
        "errors": result.errors,
        "skipped": result.skipped,
        "rule_results": [
            {
                "rule_name": rr.rule_name,
                "passed": rr.passed,
                "residuals": rr.residuals,
                "warnings": rr.warnings,
                "errors": rr.errors,
            }
            for rr in result.rule_results
        ],
    }


def render_audit_markdown(result: AuditResult, source: str = "<stdin>") -> str:
    template = _template_env().get_template("audit_report.md.j2")
    return template.render(
        result=result,
        source=source,
        version=package_version(),
    )


def write_audit_report(result: AuditResult, path: Path, source: str = "<stdin>") -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_audit_markdown(result, source), encoding="utf-8")
    return path
