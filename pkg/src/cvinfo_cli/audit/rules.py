from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from ..entropy import EntropyKind, entropy_bounds_residuals
from ..inequalities import vn_ssa_conditional_residual, vn_ssa_residual

if TYPE_CHECKING:
    from .checker import AuditContext


@dataclass
class RuleResult:
    rule_name: str
    passed: bool
    residuals: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def gate(self, name: str, value: float, tol: float) -> None:
        """Record a residual; anything below -tol is a violation."""
        self.residuals[name] = value
        if value < -tol:
            self.errors.append(f"{name} residual {value:.6e} is below -{tol:g}")
            self.passed = False


class Rule(ABC):
    group_counts: tuple[int, ...] = (2, 3)

    @property
    @abstractmethod
    def name(self) -> str:
        ...

    @abstractmethod
    def check(self, ctx: "AuditContext") -> RuleResult:
        ...

    def applies_to(self, groups: int) -> bool:
        return groups in self.group_counts


def _needs_spectrum(rule: Rule, ctx: "AuditContext", result: RuleResult) -> bool:
    if ctx.kind is EntropyKind.VON_NEUMANN and not ctx.bona_fide:
        result.warnings.append(f"{rule.name}: skipped, H needs a bona fide covariance matrix")
        return False
    return True


def _informational(
    rule: Rule, ctx: "AuditContext", result: RuleResult, needs_bona_fide: bool
) -> bool:
    """True when the rule's inequality is not guaranteed for this kind and input."""
    if ctx.kind is EntropyKind.SQRT_DET:
        result.warnings.append(f"{rule.name}: not guaranteed for D, violations are informational")
        return True
    if needs_bona_fide and not ctx.bona_fide:
        result.warnings.append(f"{rule.name}: input is not bona fide, violations are informational")
        return True
    return False


def _record(result: RuleResult, name: str, value: float, tol: float, informational: bool) -> None:
    if informational:
        result.residuals[name] = value
    else:
        result.gate(name, value, tol)


class BonaFideRule(Rule):
    @property
    def name(self) -> str:
        return "bona_fide"

    def check(self, ctx: "AuditContext") -> RuleResult:
        result = RuleResult(rule_name=self.name, passed=True)
        result.residuals["min_symplectic_eigenvalue"] = ctx.spectrum.min
        if not ctx.bona_fide:
            result.warnings.append(
                f"Not a bona fide covariance matrix (min symplectic eigenvalue "
                f"{ctx.spectrum.min:.12g}); only positivity-based inequalities apply"
            )
        return result


class SubadditivityRule(Rule):
    group_counts = (2,)

    @property
    def name(self) -> str:
        return "subadditivity"

    def check(self, ctx: "AuditContext") -> RuleResult:
        result = RuleResult(rule_name=self.name, passed=True)
        if _needs_spectrum(self, ctx, result):
            s = ctx.entropy
            _record(
                result,
                "subadditivity",
                s(0) + s(1) - s(0, 1),
                ctx.tolerances.residual,
                _informational(self, ctx, result, needs_bona_fide=False),
            )
        return result


class TriangleRule(Rule):
    @property
    def name(self) -> str:
        return "triangle"

    def check(self, ctx: "AuditContext") -> RuleResult:
        result = RuleResult(rule_name=self.name, passed=True)
        if not _needs_spectrum(self, ctx, result):
            return result
        informational = _informational(self, ctx, result, needs_bona_fide=True)
        s, tol = ctx.entropy, ctx.tolerances.residual
        pairs = [(0, 1)] if len(ctx.partition) == 2 else [(0, 1), (1, 2), (0, 2)]
        labels = "ABC"
        for i, j in pairs:
            name = "triangle" if len(pairs) == 1 else f"triangle_{labels[i]}{labels[j]}".lower()
            _record(result, name, s(i, j) - abs(s(i) - s(j)), tol, informational)
        return result


class StrongSubadditivityRule(Rule):
    group_counts = (3,)

    @property
    def name(self) -> str:
        return "strong_subadditivity"

    def check(self, ctx: "AuditContext") -> RuleResult:
        result = RuleResult(rule_name=self.name, passed=True)
        if _needs_spectrum(self, ctx, result):
            s = ctx.entropy
            _record(
                result,
                "ssa",
                s(0, 1) + s(1, 2) - s(0) - s(2),
                ctx.tolerances.residual,
                _informational(self, ctx, result, needs_bona_fide=True),
            )
        return result


class ConditionalSSARule(Rule):
    group_counts = (3,)

    @property
    def name(self) -> str:
        return "conditional_ssa"

    def check(self, ctx: "AuditContext") -> RuleResult:
        result = RuleResult(rule_name=self.name, passed=True)
        if _needs_spectrum(self, ctx, result):
            s = ctx.entropy
            _record(
                result,
                "ssa_conditional",
                s(0, 1) + s(0, 2) - s(0) - s(0, 1, 2),
                ctx.tolerances.residual,
                _informational(self, ctx, result, needs_bona_fide=False),
            )
        return result



class VonNeumannSSARule(Rule):
    group_counts = (3,)

    @property
    def name(self) -> str:
        return "von_neumann_ssa"

    def check(self, ctx: "AuditContext") -> RuleResult:
        result = RuleResult(rule_name=self.name, passed=True)
        if not ctx.bona_fide:
            result.warnings.append(f"{self.name}: skipped, input is not bona fide")
            return result
        tol = ctx.tolerances.residual
        result.gate("ssa", vn_ssa_residual(ctx.V, ctx.partition), tol)
        result.gate("ssa_conditional", vn_ssa_conditional_residual(ctx.V, ctx.partition), tol)
        return result


class EntropyBoundsRule(Rule):
    @property
    def name(self) -> str:
        return "entropy_bounds"

    def check(self, ctx: "AuditContext") -> RuleResult:
        result = RuleResult(rule_name=self.name, passed=True)
        if not ctx.bona_fide:
            result.warnings.append(f"{self.name}: skipped, input is not bona fide")
            return result
        bounds = entropy_bounds_residuals(ctx.V)
        result.gate("lower", bounds.lower_slack, ctx.tolerances.residual)
        result.gate("upper", bounds.upper_slack, ctx.tolerances.residual)
        return result
