from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from numpy.typing import ArrayLike

from ..config import Tolerances
from ..entropy import EntropyKind, entropy
from ..symplectic import (
    CovarianceMatrix,
    Partition,
    PartitionError,
    SymplecticSpectrum,
    as_covariance,
    cholesky_factor,
    mode_count,
    reduce,
    symplectic_spectrum,
)
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

logger = logging.getLogger(__name__)


@dataclass
class AuditResult:
    partition: str
    kind: EntropyKind
    passed: bool = True
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    rule_results: list[RuleResult] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def merge(self, other: RuleResult) -> None:
        self.rule_results.append(other)
        self.warnings.extend(other.warnings)
        self.errors.extend(other.errors)
        if other.errors:
            self.passed = False

    @property
    def residuals(self) -> dict[str, dict[str, float]]:
        return {rr.rule_name: dict(rr.residuals) for rr in self.rule_results}


@dataclass
class AuditContext:
    V: CovarianceMatrix
    partition: Partition
    tolerances: Tolerances
    kind: EntropyKind = EntropyKind.LOG_DET
    _entropies: dict[tuple[int, ...], float] = field(default_factory=dict, repr=False)

    @cached_property
    def spectrum(self) -> SymplecticSpectrum:
        return symplectic_spectrum(self.V, self.tolerances.pairing)

    @cached_property
    def bona_fide(self) -> bool:
        return self.spectrum.min >= 1.0 - self.tolerances.bona_fide

    def entropy(self, *which: int) -> float:
        """Entropy of the chosen kind on the union of the given groups (0-based)."""
        key = tuple(sorted(which))
        if key not in self._entropies:
            self._entropies[key] = entropy(self.kind, reduce(self.V, self.partition.union(*key)))
        return self._entropies[key]


class AuditChecker:
    def __init__(
        self,
        rules: Optional[list[Rule]] = None,
        tolerances: Optional[Tolerances] = None,
        kind: EntropyKind = EntropyKind.LOG_DET,
    ):
        if rules is None:
            rules = self._default_rules()
        self.rules = rules
        self.tolerances = tolerances or Tolerances()
        self.kind = kind

    def _default_rules(self) -> list[Rule]:
        return [
            BonaFideRule(),
            SubadditivityRule(),
            TriangleRule(),
            StrongSubadditivityRule(),
            ConditionalSSARule(),
            VonNeumannSSARule(),
            EntropyBoundsRule(),
        ]

    def run(self, V: ArrayLike, partition: Partition) -> AuditResult:
        """Apply every rule fitting the partition's group count.

        Raises the usual covariance and partition errors for unusable input;
        rule-level failures land in the result.
        """
        arr = as_covariance(V, tol=self.tolerances.symmetry)
        cholesky_factor(arr)
        partition.validate(mode_count(arr))
        if len(partition) not in (2, 3):
            raise PartitionError(f"Audit needs 2 or 3 groups, got {len(partition)} ({partition})")

        ctx = AuditContext(V=arr, partition=partition, tolerances=self.tolerances, kind=self.kind)
        result = AuditResult(partition=str(partition), kind=self.kind)
        for rule in self.rules:
            if not rule.applies_to(len(partition)):
                logger.debug("Skipping %s for %d groups", rule.name, len(partition))
                result.skipped.append(rule.name)
                continue
            try:
                result.merge(rule.check(ctx))
            except ValueError as e:
                result.errors.append(f"{rule.name}: {e}")
                result.passed = False
        return result
