from __future__ import annotations

import json
import subprocess
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from . import __version__

SeedLike = Union[int, np.random.SeedSequence]

SIDECAR_SUFFIX = ".version.json"


def package_version() -> str:
    """``git describe`` of the source checkout, or the installed release number."""
    try:
        described = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).parent,
            capture_output=True,
            text=True,
            timeout=5,
            check=True,
        ).stdout.strip()
    except (subprocess.SubprocessError, OSError):
        described = ""
    return described or __version__


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Independent generator for ``seed``; never touches numpy's global state."""
    return np.random.default_rng(seed)


def spawn_seeds(seed: SeedLike, count: int) -> list[np.random.SeedSequence]:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return seed.spawn(count)


def stamp_version(output_path: Path, params: Optional[dict[str, Any]] = None) -> Path:
    """Record how ``output_path`` was produced in a ``<file>.version.json`` sidecar.

    ``output_path`` itself is not touched.
    """
    record: dict[str, Any] = {
        "version": package_version(),
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "file": output_path.name,
        "params": params or {},
    }
    sidecar = output_path.with_name(output_path.name + SIDECAR_SUFFIX)
    sidecar.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return sidecar
