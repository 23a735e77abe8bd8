"""Triangle-inequality regions for pure three-mode states.

A pure three-mode state is fixed, up to local unitaries, by the single-mode
invariants a, b, c (square roots of the reduced determinants). For each
entropy kind the admissible region is where every single-mode entropy is at
most the sum of the other two.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np
from numpy.typing import NDArray

from ..entropy import EntropyKind, single_mode_entropy

logger = logging.getLogger(__name__)

CSV_HEADER = ("a", "b", "c", "in_H", "in_M", "in_D")


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    num: int

    def __post_init__(self) -> None:
        if self.num < 1:
            raise ValueError(f"Grid needs at least one point, got {self.num}")
        if self.start < 1 or self.stop < self.start:
            raise ValueError(f"Grid [{self.start}, {self.stop}] must lie within [1, inf)")

    def values(self) -> NDArray[np.float64]:
        return np.linspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class RegionPoint:
    a: float
    b: float
    c: float
    in_h: bool
    in_m: bool
    in_d: bool

    def member(self, kind: EntropyKind) -> bool:
        return {
            EntropyKind.VON_NEUMANN: self.in_h,
            EntropyKind.LOG_DET: self.in_m,
            EntropyKind.SQRT_DET: self.in_d,
        }[kind]

    @property
    def nested(self) -> bool:
        """D inside M inside H at this point."""
        return (not self.in_d or self.in_m) and (not self.in_m or self.in_h)

    def as_row(self, digits: int = 12) -> list[str]:
        fmt = f".{digits}g"
        return [
            format(self.a, fmt),
            format(self.b, fmt),
            format(self.c, fmt),
            str(int(self.in_h)),
            str(int(self.in_m)),
            str(int(self.in_d)),
        ]


def three_mode_region_member(kind: EntropyKind, a: float, b: float, c: float) -> bool:
    """|S_A - S_B| <= S_C <= S_A + S_B under every permutation of the roles."""
    s_a, s_b, s_c = (single_mode_entropy(kind, x) for x in (a, b, c))
    return s_a <= s_b + s_c and s_b <= s_a + s_c and s_c <= s_a + s_b


def region_point(a: float, b: float, c: float) -> RegionPoint:
    return RegionPoint(
        a=float(a),
        b=float(b),
        c=float(c),
        in_h=three_mode_region_member(EntropyKind.VON_NEUMANN, a, b, c),
        in_m=three_mode_region_member(EntropyKind.LOG_DET, a, b, c),
        in_d=three_mode_region_member(EntropyKind.SQRT_DET, a, b, c),
    )


def scan_region(
    c: float, a_range: GridSpec, b_range: GridSpec, workers: int = 1
) -> list[RegionPoint]:
    """Evaluate every (a, b) grid point at fixed c, in row-major order (a outer, b inner).

    Rows may be evaluated concurrently; the returned order does not depend on ``workers``.
    """
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    a_values, b_values = a_range.values(), b_range.values()

    def row(a: float) -> list[RegionPoint]:
        return [region_point(a, b, c) for b in b_values]

    logger.debug(
        "Scanning %d x %d grid at c=%g with %d worker(s)", len(a_values), len(b_values), c, workers
    )
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, a_values))
    else:
        rows = [row(a) for a in a_values]
    return [pt for r in rows for pt in r]


def nesting_violations(points: Iterable[RegionPoint]) -> list[RegionPoint]:
    return [pt for pt in points if not pt.nested]


def write_region_csv(points: Iterable[RegionPoint], stream: TextIO, digits: int = 12) -> int:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    count = 0
    for pt in points:
        writer.writerow(pt.as_row(digits))
        count += 1
    return count
