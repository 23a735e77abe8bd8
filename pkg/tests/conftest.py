from __future__ import annotations

import json
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from cvinfo_cli.symplectic import Partition, two_mode_squeezer
from cvinfo_cli.reproducibility import make_rng


def tmsv(r: float) -> np.ndarray:
    S = two_mode_squeezer(2, 1, 2, r)
    return S @ S.T


def random_tripartition(seed: int, n: int, cover: bool = False) -> Partition:
    """Three nonempty groups drawn from modes 1..n; all modes used when ``cover``."""
    rng = make_rng(seed)
    perm = [int(m) for m in rng.permutation(np.arange(1, n + 1))]
    used = n if cover else int(rng.integers(3, n + 1))
    cut1 = int(rng.integers(1, used - 1))
    cut2 = int(rng.integers(cut1 + 1, used))
    return Partition((tuple(perm[:cut1]), tuple(perm[cut1:cut2]), tuple(perm[cut2:used])))


@pytest.fixture
def cm_file(tmp_path: Path) -> Callable[..., Path]:
    def _write(matrix, name: str = "cm.json") -> Path:
        arr = np.asarray(matrix, dtype=float)
        path = tmp_path / name
        path.write_text(
            json.dumps({"modes": arr.shape[0] // 2, "matrix": arr.tolist()}), encoding="utf-8"
        )
        return path

    return _write
