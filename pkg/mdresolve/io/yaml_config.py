"""YAML run-config loader for mdresolve - requires PyYAML."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from ..exceptions import ConfigError


def _check_pyyaml():
    """Check if PyYAML is installed, raise helpful error if not."""
    try:
        import yaml  # noqa: F401
        return True
    except ImportError:
        raise ImportError(
            "PyYAML is required to load YAML run configs. "
            "Install it with: pip install mdresolve[yaml] "
            "or: pip install pyyaml"
        )


def load_config_file(path: Path | str) -> dict[str, Any]:
    """
    Read a run config as a flat mapping of RunConfig fields.

    Raises:
        ImportError: If PyYAML is not installed.
        ConfigError: If the file is missing or is not a mapping.
    """
    _check_pyyaml()
    import yaml

    path = Path(path)
    if not path.exists():
        raise ConfigError("config", f"file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError("config", f"{path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path} must hold a mapping, got {type(data).__name__}")
    return data
