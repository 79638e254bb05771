"""Tool settings for the storegate command."""

import copy
from pathlib import Path
from typing import Optional, Union

import toml
import yaml

from .errors import ConfigError, IoError

DEFAULT_CONFIG = {
    "clid_db": None,
    "log_level": "WARNING",
    "bench": {
        "objects": 100_000,
        "retrieves": 1_000_000,
        "seed": 0,
    },
    "pipeline": {
        "events": None,
    },
}

CONFIG_FILES = [
    "storegate.yaml",
    "storegate.yml",
    "storegate.toml",
    ".storegate.yaml",
    ".storegate.yml",
    ".storegate.toml",
]


def find_config_file(project_path: Path) -> Optional[Path]:
    """Find a settings file in ``project_path``."""
    for name in CONFIG_FILES:
        config_path = project_path / name
        if config_path.exists():
            return config_path
    return None


def load_config(config_path: Optional[Path] = None, project_path: Optional[Path] = None) -> dict:
    """Load settings from file or defaults."""
    config = copy.deepcopy(DEFAULT_CONFIG)

    if project_path is None:
        project_path = Path.cwd()

    if config_path is None:
        config_path = find_config_file(project_path)
    elif not config_path.exists():
        raise IoError(config_path, FileNotFoundError(2, "No such file or directory"))

    if config_path:
        config = _merge_config(config, _load_file(config_path))
        if config.get("clid_db"):
            clid_db = Path(config["clid_db"])
            if not clid_db.is_absolute():
                config["clid_db"] = str(config_path.parent / clid_db)

    return config


def _load_file(path: Path) -> dict:
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(path, e) from e

    try:
        if path.suffix in (".yaml", ".yml"):
            data = yaml.safe_load(content) or {}
        elif path.suffix == ".toml":
            data = toml.loads(content)
        else:
            raise ConfigError(f"unsupported settings format: {path.suffix}")
    except (yaml.YAMLError, toml.TomlDecodeError) as e:
        raise ConfigError(f"{path}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"{path}: settings must be a mapping")
    return data


def _merge_config(base: dict, override: dict) -> dict:
    """Deep merge configuration dictionaries."""
    result = base.copy()

    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _merge_config(result[key], value)
        else:
            result[key] = value

    return result


def save_config(config: dict, path: Union[str, Path]) -> None:
    """Save settings, YAML or TOML by suffix."""
    path = Path(path)
    if path.suffix in (".yaml", ".yml"):
        content = yaml.dump(config, default_flow_style=False, sort_keys=False)
    elif path.suffix == ".toml":
        content = toml.dumps({k: v for k, v in config.items() if v is not None})
    else:
        raise ConfigError(f"unsupported settings format: {path.suffix}")

    try:
        path.write_text(content, encoding="utf-8")
    except OSError as e:
        raise IoError(path, e) from e
