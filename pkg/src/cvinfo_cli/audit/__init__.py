from __future__ import annotations

from .checker import AuditChecker, AuditContext, AuditResult
from .report import audit_to_dict, render_audit_markdown, write_audit_report
from .rules import (
    BonaFideRule,
    ConditionalSSARule,
    EntropyBoundsRule,
    Rule,
    RuleResult,
    StrongSubadditivityRule,
    SubadditivityRule,
    TriangleRule,
    VonNeumannSSARule,
)

__all__ = [
    "AuditChecker",
    "AuditContext",
    "AuditResult",
    "audit_to_dict",
    "render_audit_markdown",
    "write_audit_report",
    "Rule",
    "RuleResult",
    "BonaFideRule",
    "SubadditivityRule",
    "TriangleRule",
    "StrongSubadditivityRule",
    "ConditionalSSARule",
    "VonNeumannSSARule",
    "EntropyBoundsRule",
]
