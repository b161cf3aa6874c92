"""Run configuration shared by the CLI and the Resolver facade."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

from .engine.answers import STRATEGIES
from .engine.resolve import DEFAULT_DEPTH, DEFAULT_LIMIT, DEFAULT_MAX_STEPS
from .exceptions import ConfigError

FORMATS = ("json", "csv")
PATH_FIELDS = ("schema", "data", "mds", "query", "out")


@dataclass(frozen=True)
class RunConfig:
    """
    Settings for one run.

    Sources apply in order: field defaults, an optional YAML file, then
    explicit command-line flags.
    """
    schema: Optional[Path] = None
    data: Optional[Path] = None
    mds: Optional[Path] = None
    query: Optional[Path] = None
    strategy: str = "auto"
    limit: int = DEFAULT_LIMIT
    depth: int = DEFAULT_DEPTH
    max_steps: int = DEFAULT_MAX_STEPS
    seed: int = 0
    trials: int = 100
    out: Optional[Path] = None
    format: str = "json"
    fixture: Optional[str] = None

    def __post_init__(self):
        for name in PATH_FIELDS:
            value = getattr(self, name)
            if value is not None and not isinstance(value, Path):
                object.__setattr__(self, name, Path(value))
        for name in ("limit", "depth", "max_steps", "trials"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ConfigError(name, f"must be a positive integer, got {value!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed", f"must be an integer, got {self.seed!r}")
        if self.strategy not in STRATEGIES:
            raise ConfigError("strategy", f"expected one of {', '.join(STRATEGIES)}, got {self.strategy!r}")
        if self.format not in FORMATS:
            raise ConfigError("format", f"expected one of {', '.join(FORMATS)}, got {self.format!r}")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> RunConfig:
        """Build from a mapping; unknown keys are an error."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], "unknown setting")
        return cls(**dict(data))

    @classmethod
    def from_file(cls, path: Path | str) -> RunConfig:
        """Load a YAML run config (requires PyYAML)."""
        from .io.yaml_config import load_config_file

        return cls.from_mapping(load_config_file(path))

    def merged(self, **overrides: Any) -> RunConfig:
        """Copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def check_paths(self, *names: str) -> None:
        """
        Verify that input paths exist.

        Args:
            names: Fields to check; all set input paths when empty.

        Raises:
            ConfigError: If a set path does not exist.
        """
        for name in names or ("schema", "data", "mds", "query"):
            path = getattr(self, name)
            if path is not None and not path.exists():
                raise ConfigError(name, f"path does not exist: {path}")

    def require(self, *names: str) -> None:
        """Raise ConfigError for the first named field that is unset."""
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(name, "required for this command")
