"""EPR steering by Gaussian measurements, decided at the covariance-matrix level.

Party A ("measured") steers party B ("steered"); the conditional covariance
matrix of B after A's optimal Gaussian measurements is the Schur complement of
V_A in V_AB.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .config import DEFAULTS
from .reproducibility import make_rng, spawn_seeds
from .symplectic import (
    CovarianceMatrix,
    HypothesisError,
    Partition,
    PartitionError,
    SymplecticSpectrum,
    as_covariance,
    logdet,
    mode_count,
    random_cm,
    random_partition,
    schur_complement,
    symplectic_spectrum,
    two_mode_squeezer,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SteeringReport:
    measured: tuple[int, ...]
    steered: tuple[int, ...]
    schur_spectrum: SymplecticSpectrum
    steerability: float
    steerable: bool

    @property
    def direction(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.measured, self.steered

    def to_dict(self) -> dict[str, Any]:
        return {
            "direction": [list(self.measured), list(self.steered)],
            "schur_spectrum": list(self.schur_spectrum.values),
            "G": self.steerability,
            "steerable": self.steerable,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class MonogamyVerdict:
    g_ab: float
    g_cb: float
    product_of_conditionals: float
    consistent: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "g_ab": self.g_ab,
            "g_cb": self.g_cb,
            "product_of_conditionals": self.product_of_conditionals,
            "consistent": self.consistent,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class JointSteering(NamedTuple):
    g_ab: float
    g_cb: float


@dataclass(frozen=True)
class MonogamySample:
    seed: int
    partition: Partition
    verdict: MonogamyVerdict


def _quadrature_indices(mode: int, n: int) -> tuple[int, int]:
    if not 1 <= mode <= n:
        raise PartitionError(f"Mode {mode} out of range [1, {n}]")
    return 2 * (mode - 1), 2 * (mode - 1) + 1


def optimal_gains(V: ArrayLike, measured: int = 1, steered: int = 2) -> tuple[float, float]:
    """Linear-inference gains g_q, g_p minimizing the inferred variances of the steered mode."""
    arr = as_covariance(V)
    n = mode_count(arr)
    if measured == steered:
        raise PartitionError("Measured and steered modes must differ")
    qa, pa = _quadrature_indices(measured, n)
    qb, pb = _quadrature_indices(steered, n)
    return float(arr[qa, qb] / arr[qa, qa]), float(arr[pa, pb] / arr[pa, pa])


def reid_product(V: ArrayLike, measured: int = 1, steered: int = 2) -> float:
    """Product of the optimally inferred q and p variances of the steered mode.

    Pairs q with q and p with p; a value below 1 signals steering.
    """
    arr = as_covariance(V)
    n = mode_count(arr)
    g_q, g_p = optimal_gains(arr, measured, steered)
    qa, pa = _quadrature_indices(measured, n)
    qb, pb = _quadrature_indices(steered, n)
    var_q = arr[qb, qb] - 2 * g_q * arr[qa, qb] + g_q**2 * arr[qa, qa]
    var_p = arr[pb, pb] - 2 * g_p * arr[pa, pb] + g_p**2 * arr[pa, pa]
    return float(var_q * var_p)


def min_reid(
    V: ArrayLike, measured: Sequence[int], steered: Sequence[int] | None = None
) -> float:
    """det V_AB / det V_A, the Reid product minimized over local symplectic frames."""
    return float(np.exp(logdet(schur_complement(as_covariance(V), measured, steered))))


def _steerability(spectrum: SymplecticSpectrum, clamp: float) -> float:
    # eigenvalues in [1 - clamp, 1) count as 1
    return max(float(-sum(np.log(nu) for nu in spectrum if nu < 1.0 - clamp)), 0.0)


def steering_criterion(
    V: ArrayLike,
    measured: Sequence[int],
    tol: float = DEFAULTS.steering,
    steered: Sequence[int] | None = None,
) -> bool:
    """True when the Schur complement violates the bona fide condition.

    Same verdict as ``gaussian_steerability(...).steerable``.
    """
    return gaussian_steerability(V, measured, steered, tol).steerable


def gaussian_steerability(
    V: ArrayLike,
    measured: Sequence[int],
    steered: Sequence[int] | None = None,
    tol: float = DEFAULTS.steering,
    clamp: float = DEFAULTS.entropy_clamp,
) -> SteeringReport:
    arr = as_covariance(V)
    n = mode_count(arr)
    measured = tuple(int(m) for m in measured)
    if steered is None:
        steered = tuple(m for m in range(1, n + 1) if m not in measured)
    steered = tuple(int(m) for m in steered)

    spectrum = symplectic_spectrum(schur_complement(arr, measured, steered))
    g = _steerability(spectrum, clamp)
    return SteeringReport(
        measured=measured,
        steered=steered,
        schur_spectrum=spectrum,
        steerability=g,
        steerable=g > tol,
    )


def monogamy_check(
    V: ArrayLike,
    p: Partition,
    tol: float = DEFAULTS.steering,
    residual_tol: float = DEFAULTS.residual,
) -> MonogamyVerdict:
    """Joint steering of a single mode B by A and C, which second moments forbid."""
    arr = as_covariance(V)
    p.require_groups(3).validate(mode_count(arr))
    a, b, c = p
    if len(b) != 1:
        raise HypothesisError(f"Steered group must be a single mode, got {list(b)}")

    product = float(
        np.exp(logdet(schur_complement(arr, a, b)) + logdet(schur_complement(arr, c, b)))
    )
    g_ab = gaussian_steerability(arr, a, b, tol).steerability
    g_cb = gaussian_steerability(arr, c, b, tol).steerability
    consistent = product >= 1.0 - residual_tol and not (g_ab > tol and g_cb > tol)
    if not consistent:
        logger.warning("Monogamy violated for partition %s: product=%.12g", p, product)
    return MonogamyVerdict(
        g_ab=g_ab, g_cb=g_cb, product_of_conditionals=product, consistent=consistent
    )


def four_mode_example_cm(a: float, s: float) -> CovarianceMatrix:
    """S_34(a) S_12(a) S_23(s) S_23(s)^T S_12(a)^T S_34(a)^T: pure, symmetric under 1<->4, 2<->3."""
    S = two_mode_squeezer(4, 3, 4, a) @ two_mode_squeezer(4, 1, 2, a) @ two_mode_squeezer(4, 2, 3, s)
    V = S @ S.T
    return (V + V.T) / 2


def joint_steerability_demo(a: float, s: float) -> JointSteering:
    """G for {1} -> {2,3} and {4} -> {2,3} on the four-mode example state."""
    V = four_mode_example_cm(a, s)
    return JointSteering(
        g_ab=gaussian_steerability(V, (1,), (2, 3)).steerability,
        g_cb=gaussian_steerability(V, (4,), (2, 3)).steerability,
    )


def _monogamy_sample(
    seed: int,
    n_a_range: tuple[int, int],
    n_c_range: tuple[int, int],
    nu_max: float,
    strength: float,
) -> MonogamySample:
    shape_seed, part_seed, cm_seed = spawn_seeds(seed, 3)
    rng = make_rng(shape_seed)
    n_a = int(rng.integers(n_a_range[0], n_a_range[1] + 1))
    n_c = int(rng.integers(n_c_range[0], n_c_range[1] + 1))
    p = random_partition((n_a, 1, n_c), part_seed)
    V = random_cm(n_a + 1 + n_c, cm_seed, nu_max, strength)
    return MonogamySample(seed=seed, partition=p, verdict=monogamy_check(V, p))


def monogamy_sweep(
    seeds: Sequence[int],
    n_a_range: tuple[int, int] = (1, 3),
    n_c_range: tuple[int, int] = (1, 3),
    nu_max: float = 2.0,
    strength: float = 0.5,
    workers: int = 1,
) -> list[MonogamySample]:
    """Monogamy verdicts on random tripartite states, one per seed, in seed order."""

    def run(seed: int) -> MonogamySample:
        return _monogamy_sample(int(seed), n_a_range, n_c_range, nu_max, strength)

    logger.debug("Monogamy sweep over %d seeds with %d worker(s)", len(seeds), workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, seeds))
    return [run(seed) for seed in seeds]
