"""Entropy-like functionals of covariance matrices.

Natural logarithms throughout; a different base rescales every entropy by the
same constant.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import xlogy

from .config import DEFAULTS
from .symplectic import HypothesisError, as_covariance, logdet, mode_count, symplectic_spectrum

logger = logging.getLogger(__name__)


class EntropyKind(str, Enum):
    VON_NEUMANN = "H"
    LOG_DET = "M"
    SQRT_DET = "D"


class EntropyBounds(NamedTuple):
    lower_slack: float
    upper_slack: float


def _mode_entropy(half_excess: float) -> float:
    # x = (nu - 1)/2 >= 0; h = (1+x) ln(1+x) - x ln x, regrouped for x >= 1 to avoid cancellation
    x = half_excess
    if x < 1.0:
        return float((1.0 + x) * np.log1p(x) - xlogy(x, x))
    return float(np.log1p(x) + x * np.log1p(1.0 / x))


def logdet_entropy(V: ArrayLike) -> float:
    """M = ln det V, via the Cholesky factor."""
    return logdet(as_covariance(V))


def renyi2_entropy(V: ArrayLike) -> float:
    return logdet_entropy(V) / 2.0


def sqrt_det_entropy(V: ArrayLike) -> float:
    """D = sqrt(det V) - 1. Defined for any positive definite V."""
    return float(np.exp(logdet_entropy(V) / 2.0) - 1.0)


def von_neumann_entropy(V: ArrayLike, clamp: float = DEFAULTS.entropy_clamp) -> float:
    """Gaussian von Neumann entropy from the symplectic spectrum.

    Eigenvalues in [1 - clamp, 1) are treated as exactly 1; anything lower means
    V is not a bona fide covariance matrix.
    """
    spectrum = symplectic_spectrum(V)
    total = 0.0
    for nu in spectrum:
        if nu < 1.0:
            if nu < 1.0 - clamp:
                raise HypothesisError(
                    f"Symplectic eigenvalue {nu:.12g} < 1: not a bona fide covariance matrix"
                )
            logger.debug("Clamping symplectic eigenvalue %.15g to 1", nu)
            nu = 1.0
        total += _mode_entropy((nu - 1.0) / 2.0)
    return total


# beyond this exponent h(nu) = ln(nu / 2) + 1 to double precision
_ASYMPTOTIC_EXPONENT = 40.0


def f_bound(n: int, m: float) -> float:
    """Bound function f_n(m) relating von Neumann entropy to the log-determinant.

    Uses f_n(m) = n f_1(m/n) and f_1(2 ln nu) = h(nu), the single-mode entropy, so the
    two individually divergent logarithms never have to cancel near m = 0. Large m
    takes the asymptotic form, which stays finite where expm1 overflows.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    t = m / (2.0 * n)
    if t > _ASYMPTOTIC_EXPONENT:
        return float(n * (t + 1.0 - np.log(2.0)))
    return n * _mode_entropy(float(np.expm1(t)) / 2.0)


def single_mode_entropy(kind: EntropyKind, x: float) -> float:
    """Entropy of a single mode with symplectic invariant x = sqrt(det V) >= 1."""
    if x < 1:
        raise ValueError(f"Single-mode invariant must be >= 1, got {x}")
    if kind is EntropyKind.VON_NEUMANN:
        return _mode_entropy((x - 1.0) / 2.0)
    if kind is EntropyKind.LOG_DET:
        return float(2.0 * np.log(x))
    return float(x - 1.0)


def entropy(kind: EntropyKind, V: ArrayLike) -> float:
    if kind is EntropyKind.VON_NEUMANN:
        return von_neumann_entropy(V)
    if kind is EntropyKind.LOG_DET:
        return logdet_entropy(V)
    return sqrt_det_entropy(V)


def entropy_bounds_residuals(V: ArrayLike) -> EntropyBounds:
    """(H - f_1(M), f_n(M) - H); both nonnegative for bona fide V."""
    arr = as_covariance(V)
    n = mode_count(arr)
    h = von_neumann_entropy(arr)
    m = max(logdet(arr), 0.0)
    return EntropyBounds(h - f_bound(1, m), f_bound(n, m) - h)
