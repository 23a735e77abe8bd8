"""Covariance-matrix and symplectic-matrix algebra.

Conventions: modes are ordered (q1, p1, ..., qn, pn), the vacuum covariance
matrix is the identity, and every public function addresses modes with
1-based indices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from .config import DEFAULTS
from .reproducibility import SeedLike, make_rng, spawn_seeds

logger = logging.getLogger(__name__)

CovarianceMatrix = NDArray[np.float64]
SymplecticMatrix = NDArray[np.float64]

SIGMA = np.array([[0.0, 1.0], [-1.0, 0.0]])
Z = np.diag([1.0, -1.0])


class CovarianceError(ValueError):
    """Base class for malformed covariance matrices."""


class DimensionError(CovarianceError):
    pass


class AsymmetricMatrixError(CovarianceError):
    pass


class NotPositiveDefiniteError(CovarianceError):
    pass


class PartitionError(ValueError):
    pass


class HypothesisError(ValueError):
    """An operation's mathematical precondition does not hold for the input."""


@dataclass(frozen=True)
class SymplecticSpectrum:
    values: tuple[float, ...]
    pairing_error: float = 0.0

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def min(self) -> float:
        return self.values[-1]

    @property
    def max(self) -> float:
        return self.values[0]

    def as_array(self) -> NDArray[np.float64]:
        return np.array(self.values)


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint groups of 1-based mode indices; unlisted modes are traced out."""

    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        groups = tuple(tuple(int(m) for m in g) for g in self.groups)
        seen: set[int] = set()
        for g in groups:
            if not g:
                raise PartitionError("Partition groups must be nonempty")
            for m in g:
                if m < 1:
                    raise PartitionError(f"Mode index {m} out of range (indices are 1-based)")
                if m in seen:
                    raise PartitionError(f"Mode {m} appears in more than one group")
                seen.add(m)
        object.__setattr__(self, "groups", groups)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"1;2;3,4"``: groups split by ``;``, modes by ``,``."""
        cleaned = "".join(text.split())
        if not cleaned:
            raise PartitionError("Empty partition")
        groups: list[tuple[int, ...]] = []
        for chunk in cleaned.split(";"):
            if not chunk:
                raise PartitionError(f"Empty group in partition '{text}'")
            try:
                groups.append(tuple(int(tok) for tok in chunk.split(",")))
            except ValueError as e:
                raise PartitionError(f"Bad partition syntax '{text}': {e}") from e
        return cls(tuple(groups))

    def validate(self, n: int) -> "Partition":
        for m in self.modes:
            if m > n:
                raise PartitionError(f"Mode {m} out of range for a {n}-mode matrix")
        return self

    def require_groups(self, count: int) -> "Partition":
        if len(self.groups) != count:
            raise PartitionError(f"Expected {count} groups, got {len(self.groups)} ({self})")
        return self

    def union(self, *which: int) -> tuple[int, ...]:
        """Modes of the groups at positions ``which`` (0-based), concatenated in that order."""
        out: list[int] = []
        for w in which:
            out.extend(self.groups[w])
        return tuple(out)

    @property
    def modes(self) -> tuple[int, ...]:
        return self.union(*range(len(self.groups)))

    def __len__(self) -> int:
        return len(self.groups)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.groups[i]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.groups)

    def __str__(self) -> str:
        return ";".join(",".join(str(m) for m in g) for g in self.groups)


def mode_count(V: ArrayLike) -> int:
    return np.shape(V)[0] // 2


def mode_indices(modes: Iterable[int], n: int) -> list[int]:
    idx: list[int] = []
    seen: set[int] = set()
    for m in modes:
        m = int(m)
        if not 1 <= m <= n:
            raise PartitionError(f"Mode {m} out of range [1, {n}]")
        if m in seen:
            raise PartitionError(f"Mode {m} listed twice")
        seen.add(m)
        idx.extend((2 * (m - 1), 2 * (m - 1) + 1))
    return idx


def _square_even(arr: NDArray[np.float64]) -> int:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[0] % 2:
        raise DimensionError(f"Matrix dimension must be even and positive, got {arr.shape[0]}")
    return arr.shape[0] // 2


def as_covariance(matrix: ArrayLike, tol: float = DEFAULTS.symmetry) -> CovarianceMatrix:
    """Validate shape and symmetry; return a symmetrized float64 copy."""
    arr = np.array(matrix, dtype=float)
    _square_even(arr)
    if not np.all(np.isfinite(arr)):
        raise CovarianceError("Matrix contains non-finite entries")
    excess = np.abs(arr - arr.T) - tol * np.maximum(1.0, np.abs(arr))
    if np.any(excess > 0):
        j, k = np.unravel_index(np.argmax(excess), arr.shape)
        raise AsymmetricMatrixError(
            f"Matrix not symmetric: V[{j + 1},{k + 1}]={arr[j, k]!r} vs V[{k + 1},{j + 1}]={arr[k, j]!r}"
        )
    return (arr + arr.T) / 2


def cholesky_factor(V: ArrayLike) -> NDArray[np.float64]:
    """Lower Cholesky factor; raises NotPositiveDefiniteError when V is not PD."""
    try:
        return linalg.cholesky(np.asarray(V, dtype=float), lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefiniteError("Matrix is not positive definite") from e


def logdet(V: ArrayLike) -> float:
    return float(2.0 * np.sum(np.log(np.diag(cholesky_factor(V)))))


def omega(n: int) -> NDArray[np.float64]:
    """Symplectic form sigma^{(+)n}."""
    if n < 1:
        raise DimensionError(f"Mode count must be >= 1, got {n}")
    return np.kron(np.eye(n), SIGMA)


def _spectrum(V: NDArray[np.float64], pairing_tol: float) -> SymplecticSpectrum:
    n = mode_count(V)
    w, U = linalg.eigh(V)
    if w[0] <= 0:
        raise NotPositiveDefiniteError("Matrix is not positive definite")
    sqrt_v = (U * np.sqrt(w)) @ U.T
    om = omega(n)
    M = sqrt_v @ om @ V @ om.T @ sqrt_v
    lam = linalg.eigvalsh((M + M.T) / 2)
    pairs = lam.reshape(n, 2)
    scale = np.maximum(np.abs(pairs[:, 1]), np.finfo(float).tiny)
    mismatch = float(np.max(np.abs(pairs[:, 1] - pairs[:, 0]) / scale))
    if mismatch > pairing_tol:
        logger.warning(
            "Symplectic eigenvalue pairs disagree by %.3g (relative), above %.3g",
            mismatch,
            pairing_tol,
        )
    nu = np.sqrt(np.clip(pairs.mean(axis=1), 0.0, None))[::-1]
    return SymplecticSpectrum(tuple(float(x) for x in nu), pairing_error=mismatch)


def symplectic_spectrum(
    V: ArrayLike, pairing_tol: float = DEFAULTS.pairing
) -> SymplecticSpectrum:
    """Symplectic eigenvalues of V, sorted descending.

    The squares are the doubly degenerate eigenvalues of the symmetric matrix
    V^{1/2} Omega V Omega^T V^{1/2}, which shares its spectrum with -V Omega V Omega.
    Values below 1 are returned as computed.
    """
    return _spectrum(as_covariance(V), pairing_tol)


def is_bona_fide(V: ArrayLike, tol: float = DEFAULTS.bona_fide) -> bool:
    """V > 0 and every symplectic eigenvalue >= 1 - tol (equivalent to V + i Omega >= 0)."""
    arr = as_covariance(V)
    try:
        cholesky_factor(arr)
        spectrum = _spectrum(arr, DEFAULTS.pairing)
    except NotPositiveDefiniteError:
        return False
    return spectrum.min >= 1.0 - tol


def is_symplectic(S: ArrayLike, tol: float = DEFAULTS.symplectic) -> bool:
    arr = np.asarray(S, dtype=float)
    n = _square_even(arr)
    om = omega(n)
    return bool(np.max(np.abs(arr @ om @ arr.T - om)) <= tol)


def two_mode_squeezer(n: int, i: int, j: int, r: float) -> SymplecticMatrix:
    """Two-mode squeezer on modes i, j: cosh(r) I on the diagonal blocks, sinh(r) Z off it."""
    if i == j:
        raise PartitionError("Two-mode squeezer needs two distinct modes")
    ii, jj = mode_indices([i], n), mode_indices([j], n)
    S = np.eye(2 * n)
    c, s = np.cosh(r), np.sinh(r)
    S[np.ix_(ii, ii)] = c * np.eye(2)
    S[np.ix_(jj, jj)] = c * np.eye(2)
    S[np.ix_(ii, jj)] = s * Z
    S[np.ix_(jj, ii)] = s * Z
    return S


def single_mode_squeezer(r: float) -> SymplecticMatrix:
    return np.diag([np.exp(r), np.exp(-r)])


def random_symplectic(n: int, seed: SeedLike, strength: float = 1.0) -> SymplecticMatrix:
    """S = exp(Omega A) with A symmetric, entries i.i.d. uniform in [-strength, strength]."""
    if n < 1:
        raise DimensionError(f"Mode count must be >= 1, got {n}")
    if strength <= 0:
        raise ValueError(f"strength must be > 0, got {strength}")
    rng = make_rng(seed)
    B = rng.uniform(-strength, strength, size=(2 * n, 2 * n))
    A = np.triu(B) + np.triu(B, 1).T
    return linalg.expm(omega(n) @ A)


def random_cm_with_spectrum(
    n: int, seed: SeedLike, nu_max: float = 1.0, strength: float = 1.0
) -> tuple[CovarianceMatrix, SymplecticSpectrum]:
    """Williamson-form sample S D S^T together with the drawn symplectic spectrum."""
    if nu_max < 1:
        raise ValueError(f"nu_max must be >= 1, got {nu_max}")
    sym_seed, nu_seed = spawn_seeds(seed, 2)
    S = random_symplectic(n, sym_seed, strength)
    nu = make_rng(nu_seed).uniform(1.0, nu_max, size=n)
    V = S @ np.diag(np.repeat(nu, 2)) @ S.T
    spectrum = SymplecticSpectrum(tuple(float(x) for x in np.sort(nu)[::-1]))
    return (V + V.T) / 2, spectrum


def random_cm(
    n: int, seed: SeedLike, nu_max: float = 1.0, strength: float = 1.0
) -> CovarianceMatrix:
    return random_cm_with_spectrum(n, seed, nu_max, strength)[0]


def random_positive_definite(
    n: int, seed: SeedLike, low: float = 0.1, high: float = 4.0
) -> NDArray[np.float64]:
    """Q^T diag(u) Q with Q Haar-orthogonal and u uniform in [low, high]; not necessarily bona fide."""
    if not 0 < low <= high:
        raise ValueError(f"Need 0 < low <= high, got [{low}, {high}]")
    rng = make_rng(seed)
    Q, R = linalg.qr(rng.standard_normal((2 * n, 2 * n)))
    Q *= np.sign(np.diag(R))
    u = rng.uniform(low, high, size=2 * n)
    V = Q.T @ np.diag(u) @ Q
    return (V + V.T) / 2


def direct_sum(*blocks: ArrayLike) -> CovarianceMatrix:
    return linalg.block_diag(*[np.asarray(b, dtype=float) for b in blocks])


def reduce(V: ArrayLike, modes: Sequence[int]) -> CovarianceMatrix:
    """Principal submatrix on ``modes`` (1-based), in the order given."""
    arr = np.asarray(V, dtype=float)
    idx = mode_indices(modes, mode_count(arr))
    if not idx:
        raise PartitionError("Cannot reduce to an empty set of modes")
    return arr[np.ix_(idx, idx)].copy()


def permute_modes(V: ArrayLike, order: Sequence[int]) -> CovarianceMatrix:
    n = mode_count(V)
    if sorted(order) != list(range(1, n + 1)):
        raise PartitionError(f"{list(order)} is not a permutation of modes 1..{n}")
    return reduce(V, order)


def schur_complement(
    V: ArrayLike, measured: Sequence[int], kept: Sequence[int] | None = None
) -> NDArray[np.float64]:
    """V_B - V_off^T V_A^{-1} V_off with A = ``measured`` and B = ``kept``.

    ``kept`` defaults to every mode not measured, in index order.
    """
    arr = np.asarray(V, dtype=float)
    n = mode_count(arr)
    measured = list(measured)
    if kept is None:
        kept = [m for m in range(1, n + 1) if m not in set(measured)]
    kept = list(kept)
    if not measured or not kept:
        raise PartitionError("Schur complement needs nonempty measured and kept groups")
    if set(measured) & set(kept):
        raise PartitionError("Measured and kept groups overlap")
    ia, ib = mode_indices(measured, n), mode_indices(kept, n)
    V_A = arr[np.ix_(ia, ia)]
    V_off = arr[np.ix_(ia, ib)]
    try:
        factor = linalg.cho_factor(V_A, lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefiniteError("Measured block is not positive definite") from e
    S = arr[np.ix_(ib, ib)] - V_off.T @ linalg.cho_solve(factor, V_off)
    return (S + S.T) / 2


def purity(V: ArrayLike) -> float:
    """(det V)^{-1/2}, the purity of the Gaussian state with covariance matrix V."""
    return float(np.exp(-0.5 * logdet(V)))


def random_partition(sizes: Sequence[int], seed: SeedLike, n: int | None = None) -> Partition:
    """Groups of the given sizes filled from a random permutation of modes 1..n."""
    total = sum(sizes)
    n = total if n is None else n
    if total > n or any(s < 1 for s in sizes):
        raise PartitionError(f"Cannot draw groups of sizes {list(sizes)} from {n} modes")
    perm = make_rng(seed).permutation(np.arange(1, n + 1))
    groups, start = [], 0
    for size in sizes:
        groups.append(tuple(int(m) for m in perm[start : start + size]))
        start += size
    return Partition(tuple(groups))
