"""Entropy inequalities exposed as signed residuals (left side minus right side).

A residual below zero means the inequality is violated; tolerances are left to
the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from ..config import DEFAULTS
from ..entropy import EntropyKind, entropy, f_bound, von_neumann_entropy
from ..symplectic import (
    HypothesisError,
    Partition,
    as_covariance,
    logdet,
    mode_count,
    reduce,
    symplectic_spectrum,
)


@dataclass(frozen=True)
class TripartiteResiduals:
    kind: EntropyKind
    ssa: float
    ssa_conditional: float
    triangle: tuple[float, float, float]


@dataclass(frozen=True)
class HierarchyChain:
    h_a: float
    chain: tuple[float, float, float]
    vn_slack: float


def _groups(V: ArrayLike, p: Partition, count: int):
    arr = as_covariance(V)
    p.require_groups(count).validate(mode_count(arr))
    return arr, p


def _logdet_of(arr, modes: Sequence[int]) -> float:
    return logdet(reduce(arr, modes))


def ssa_logdet_residual(V: ArrayLike, p: Partition) -> float:
    """M_AB + M_BC - M_A - M_C."""
    arr, p = _groups(V, p, 3)
    return (
        _logdet_of(arr, p.union(0, 1))
        + _logdet_of(arr, p.union(1, 2))
        - _logdet_of(arr, p[0])
        - _logdet_of(arr, p[2])
    )


def subadditivity_residual(V: ArrayLike, p: Partition) -> float:
    """M_A + M_B - M_AB; zero exactly when the off-diagonal block vanishes."""
    arr, p = _groups(V, p, 2)
    return _logdet_of(arr, p[0]) + _logdet_of(arr, p[1]) - _logdet_of(arr, p.union(0, 1))


def ssa_conditional_residual(V: ArrayLike, p: Partition) -> float:
    """M_AB + M_AC - M_A - M_ABC. Holds for every positive definite V."""
    arr, p = _groups(V, p, 3)
    return (
        _logdet_of(arr, p.union(0, 1))
        + _logdet_of(arr, p.union(0, 2))
        - _logdet_of(arr, p[0])
        - _logdet_of(arr, p.union(0, 1, 2))
    )


def triangle_residuals(V: ArrayLike, p: Partition) -> float:
    """M_AB - |M_A - M_B|."""
    arr, p = _groups(V, p, 2)
    m_a, m_b = _logdet_of(arr, p[0]), _logdet_of(arr, p[1])
    return _logdet_of(arr, p.union(0, 1)) - abs(m_a - m_b)


def vn_ssa_residual(V: ArrayLike, p: Partition) -> float:
    """H_AB + H_BC - H_A - H_C for the Gaussian state with covariance matrix V."""
    arr, p = _groups(V, p, 3)

    def h(modes: Sequence[int]) -> float:
        return von_neumann_entropy(reduce(arr, modes))

    return h(p.union(0, 1)) + h(p.union(1, 2)) - h(p[0]) - h(p[2])


def vn_ssa_conditional_residual(V: ArrayLike, p: Partition) -> float:
    """H_AB + H_AC - H_A - H_ABC."""
    arr, p = _groups(V, p, 3)

    def h(modes: Sequence[int]) -> float:
        return von_neumann_entropy(reduce(arr, modes))

    return h(p.union(0, 1)) + h(p.union(0, 2)) - h(p[0]) - h(p.union(0, 1, 2))


def tripartite_residuals(
    V: ArrayLike, p: Partition, kind: EntropyKind = EntropyKind.LOG_DET
) -> TripartiteResiduals:
    arr, p = _groups(V, p, 3)

    def s(*which: int) -> float:
        return entropy(kind, reduce(arr, p.union(*which)))

    s_a, s_b, s_c = s(0), s(1), s(2)
    s_ab, s_bc, s_ac = s(0, 1), s(1, 2), s(0, 2)
    return TripartiteResiduals(
        kind=kind,
        ssa=s_ab + s_bc - s_a - s_c,
        ssa_conditional=s_ab + s_ac - s_a - s(0, 1, 2),
        triangle=(
            s_ab - abs(s_a - s_b),
            s_bc - abs(s_b - s_c),
            s_ac - abs(s_a - s_c),
        ),
    )


def hierarchy_check(
    V: ArrayLike, p: Partition, purity_tol: float = DEFAULTS.purity
) -> HierarchyChain:
    """Slacks of H_A = f_1(M_A) <= f_1(M_B + M_C) <= f_1(M_B) + f_1(M_C) <= H_B + H_C.

    Requires a pure V_ABC whose A block has symplectic spectrum {1, ..., 1, nu}.
    """
    arr, p = _groups(V, p, 3)
    m_abc = _logdet_of(arr, p.union(0, 1, 2))
    if abs(np.expm1(m_abc)) > purity_tol:
        raise HypothesisError(f"V_ABC is not pure: det = {np.exp(m_abc):.12g}")
    v_a = reduce(arr, p[0])
    spec_a = symplectic_spectrum(v_a)
    stray = [nu for nu in spec_a.values[1:] if abs(nu - 1.0) > purity_tol]
    if stray:
        raise HypothesisError(
            f"Reduced A spectrum {spec_a.values} has more than one eigenvalue away from 1"
        )

    m_a = max(logdet(v_a), 0.0)
    m_b = max(_logdet_of(arr, p[1]), 0.0)
    m_c = max(_logdet_of(arr, p[2]), 0.0)
    h_a = von_neumann_entropy(v_a)
    h_b = von_neumann_entropy(reduce(arr, p[1]))
    h_c = von_neumann_entropy(reduce(arr, p[2]))

    f1 = partial(f_bound, 1)
    chain = (
        f1(m_b + m_c) - f1(m_a),
        f1(m_b) + f1(m_c) - f1(m_b + m_c),
        h_b + h_c - f1(m_b) - f1(m_c),
    )
    return HierarchyChain(h_a=h_a, chain=chain, vn_slack=h_b + h_c - h_a)


def logdet_concavity_slack(V: ArrayLike, W: ArrayLike, lam: float) -> float:
    """ln det(lam V + (1-lam) W) - lam ln det V - (1-lam) ln det W."""
    v, w = as_covariance(V), as_covariance(W)
    return logdet(lam * v + (1 - lam) * w) - lam * logdet(v) - (1 - lam) * logdet(w)


def conditional_concavity_slack(
    V: ArrayLike, W: ArrayLike, lam: float, conditioning: Sequence[int]
) -> float:
    """Concavity slack of X -> M_AB(X) - M_A(X), with A = ``conditioning`` and AB = all modes."""
    v, w = as_covariance(V), as_covariance(W)

    def g(x) -> float:
        return logdet(x) - logdet(reduce(x, conditioning))

    return g(lam * v + (1 - lam) * w) - lam * g(v) - (1 - lam) * g(w)
