from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Optional, TypeVar

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ValidationError

from .config import DEFAULTS
from .schema import CovarianceFile
from .symplectic import CovarianceMatrix, as_covariance, cholesky_factor, mode_count

T = TypeVar("T", bound=BaseModel)


class CMFileError(ValueError):
    def __init__(self, message: str, path: Optional[Path] = None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


def read_json(path: str | Path) -> dict[str, Any]:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as e:
        raise CMFileError(f"cannot read file: {e.strerror}", path=p) from e
    except json.JSONDecodeError as e:
        raise CMFileError(f"malformed JSON: {e}", path=p) from e
    if not isinstance(data, dict):
        raise CMFileError("JSON root must be an object", path=p)
    return data


def load_model(model_cls: type[T], path: str | Path) -> T:
    try:
        return model_cls.model_validate(read_json(path))
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(x) for x in first["loc"]) or "<root>"
        raise CMFileError(f"invalid {loc}: {first['msg']}", path=Path(path)) from e


def load_cm(
    path: str | Path,
    symmetry_tol: float = DEFAULTS.parse_symmetry,
    require_pd: bool = True,
) -> CovarianceMatrix:
    """Read, shape-check, symmetry-check and (by default) positivity-check a CM file."""
    model = load_model(CovarianceFile, path)
    V = as_covariance(model.matrix, tol=symmetry_tol)
    if require_pd:
        cholesky_factor(V)
    return V


def cm_payload(V: ArrayLike) -> dict[str, Any]:
    arr = np.asarray(V, dtype=float)
    return {"modes": mode_count(arr), "matrix": arr.tolist()}


def write_cm(V: ArrayLike, path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(cm_payload(V)) + "\n", encoding="utf-8")
    return p


def round_sig(x: float, digits: int = 12) -> float:
    if not math.isfinite(x):
        return x
    return float(format(x, f".{digits}g"))


def format_number(x: float, digits: int = 12) -> str:
    """Locale-independent decimal text rounded to ``digits`` significant digits."""
    return repr(round_sig(float(x), digits))


def _rounded(obj: Any, digits: int) -> Any:
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj), digits)
    if isinstance(obj, dict):
        return {k: _rounded(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v, digits) for v in obj]
    return obj


def dumps_report(payload: dict[str, Any], digits: int = 12) -> str:
    """Single-line JSON with floats rounded to ``digits`` significant digits."""
    return json.dumps(_rounded(payload, digits))
