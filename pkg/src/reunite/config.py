"""Service configuration: TOML file plus REUNITE_* environment overrides."""
from __future__ import annotations

import os

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError


def default_fixture_path(name: str) -> Path:
    return Path(str(resources.files("reunite").joinpath("fixtures", name)))


@dataclass
class ServiceConfig:
    data_dir: Path
    citizens_path: Path = field(default_factory=lambda: default_fixture_path("citizens.json"))
    stations_path: Path = field(default_factory=lambda: default_fixture_path("police_stations.json"))
    host: str = "127.0.0.1"
    port: int = 8080
    auto_approve: bool = False
    tau: float = 0.6
    dim: int = 128
    provider_seed: int = 2021
    fsync: bool = False
    embedding_server_url: str | None = None
    static_dir: Path | None = None

    def __post_init__(self):
        self.data_dir = Path(self.data_dir)
        self.citizens_path = Path(self.citizens_path)
        self.stations_path = Path(self.stations_path)
        if self.static_dir is not None:
            self.static_dir = Path(self.static_dir)
        if not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if self.dim <= 0:
            raise ConfigError(f"dim must be positive, got {self.dim}")

    @property
    def bind_address(self) -> str:
        return f"{self.host}:{self.port}"

    def validate_paths(self) -> None:
        for label, path in (("citizens", self.citizens_path), ("stations", self.stations_path)):
            if not path.is_file():
                raise ConfigError(f"{label} fixture not found: {path}")
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            probe = self.data_dir / ".write-probe"
            probe.write_text("")
            probe.unlink()
        except OSError as exc:
            raise ConfigError(f"data directory {self.data_dir} is not writable: {exc}") from exc


_ENV_PREFIX = "REUNITE_"

_FIELD_PARSERS = {
    "data_dir": Path,
    "citizens_path": Path,
    "stations_path": Path,
    "host": str,
    "port": int,
    "auto_approve": lambda v: str(v).lower() in ("1", "true", "yes", "on"),
    "tau": float,
    "dim": int,
    "provider_seed": int,
    "fsync": lambda v: str(v).lower() in ("1", "true", "yes", "on"),
    "embedding_server_url": str,
    "static_dir": Path,
}


def load_config(path: str | Path | None = None, env: dict | None = None) -> ServiceConfig:
    """Build a config from a TOML file (optional) and environment overrides."""
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
        for key, value in raw.items():
            if key not in _FIELD_PARSERS:
                raise ConfigError(f"unknown config key {key!r} in {path}")
            values[key] = _FIELD_PARSERS[key](value)
    for key, parse in _FIELD_PARSERS.items():
        env_key = _ENV_PREFIX + key.upper()
        if env_key in env:
            values[key] = parse(env[env_key])
    if "data_dir" not in values:
        raise ConfigError("data_dir must be set (config file or REUNITE_DATA_DIR)")
    return ServiceConfig(**values)
