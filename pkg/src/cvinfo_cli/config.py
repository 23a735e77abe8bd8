from __future__ import annotations

from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

CONFIG_FILENAME = "cvinfo.toml"


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")
    symmetry: float = Field(default=1e-12, gt=0.0)
    parse_symmetry: float = Field(default=1e-9, gt=0.0)
    symplectic: float = Field(default=1e-9, gt=0.0)
    bona_fide: float = Field(default=1e-7, gt=0.0)
    pairing: float = Field(default=1e-7, gt=0.0)
    entropy_clamp: float = Field(default=1e-7, gt=0.0)
    steering: float = Field(default=1e-7, gt=0.0)
    purity: float = Field(default=1e-6, gt=0.0)
    residual: float = Field(default=1e-8, gt=0.0)


class ScanSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")
    workers: int = Field(default=1, ge=1)
    digits: int = Field(default=12, ge=9, le=17)


class CviConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    tolerances: Tolerances = Tolerances()
    scan: ScanSettings = ScanSettings()


DEFAULTS = Tolerances()


class ConfigError(ValueError):
    def __init__(self, message: str, path: Optional[Path] = None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


def load_config(config_path: Path) -> CviConfig:
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}", path=config_path)

    try:
        import tomllib
    except ImportError:
        import tomli as tomllib  # type: ignore

    try:
        data = tomllib.loads(config_path.read_text(encoding="utf-8"))
    except Exception as e:
        raise ConfigError(f"Failed to parse TOML: {e}", path=config_path) from e

    try:
        return CviConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}", path=config_path) from e


def find_config(start_dir: Optional[Path] = None) -> Optional[Path]:
    """Walk up from ``start_dir`` (default: CWD) looking for ``cvinfo.toml``."""
    if start_dir is None:
        start_dir = Path.cwd()

    current = start_dir.resolve()
    while True:
        candidate = current / CONFIG_FILENAME
        if candidate.exists():
            return candidate
        if current == current.parent:
            return None
        current = current.parent


def resolve_config(explicit: Optional[Path] = None) -> CviConfig:
    if explicit is not None:
        return load_config(explicit)
    found = find_config()
    if found is None:
        return CviConfig()
    return load_config(found)
