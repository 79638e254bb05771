"""Pipeline configuration.

Line grammar (``#`` starts a comment line)::

    ALG <kind> <instance_name> [param=value ...]
    EVENTS <n>
    MODE produce|consume-lazy|consume-eager
    OUT <path>
    IN <path>
    CLIDDB <path>
    SEED <n>

The same settings can be given as a YAML or TOML mapping::

    mode: produce
    events: 2
    out: tracks.sg
    algorithms:
      - {kind: TrackMaker, name: TM, params: {n: 10, seed: 1}}

Relative paths are taken relative to the configuration file.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Union

import toml
import yaml

from ..errors import ConfigError, IoError
from ..store import Lifetime


class Mode(str, Enum):
    PRODUCE = "produce"
    CONSUME_LAZY = "consume-lazy"
    CONSUME_EAGER = "consume-eager"

    @property
    def is_consume(self) -> bool:
        return self is not Mode.PRODUCE


@dataclass
class AlgorithmSpec:
    """One configured algorithm instance."""
    kind: str
    name: str
    params: dict[str, str] = field(default_factory=dict)
    line: int = 0

    @property
    def lifetime(self) -> Lifetime:
        value = self.params.get("lifetime", Lifetime.EVENT.value)
        try:
            return Lifetime(value)
        except ValueError:
            raise ConfigError(f"{self.name}: lifetime must be 'event' or 'job', got {value!r}") from None


@dataclass
class PipelineConfig:
    algorithms: list[AlgorithmSpec] = field(default_factory=list)
    events: Optional[int] = None
    mode: Mode = Mode.PRODUCE
    output: Optional[Path] = None
    input: Optional[Path] = None
    clid_db: Optional[Path] = None
    seed: int = 0
    source: Optional[Path] = None
    # set from the command line; wins over every StoreWriter out= parameter
    output_override: Optional[Path] = None

    def override_output(self, path: Union[str, Path]) -> None:
        self.output = self.output_override = Path(path)

    @property
    def lifetimes(self) -> dict[str, Lifetime]:
        return {spec.name: spec.lifetime for spec in self.algorithms}

    @property
    def base_dir(self) -> Path:
        return self.source.parent if self.source else Path.cwd()

    def resolve(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    def validate(self) -> "PipelineConfig":
        from .algorithms import get_algorithm

        seen: set[str] = set()
        for spec in self.algorithms:
            if spec.name in seen:
                raise ConfigError(f"duplicate algorithm instance name '{spec.name}'")
            seen.add(spec.name)
            get_algorithm(spec.kind)
            spec.lifetime
        if self.events is not None and self.events < 0:
            raise ConfigError("EVENTS must not be negative")
        if self.mode.is_consume and self.input is None:
            raise ConfigError(f"MODE {self.mode.value} needs an IN file")
        return self

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "events": self.events,
            "out": str(self.output) if self.output else None,
            "in": str(self.input) if self.input else None,
            "clid_db": str(self.clid_db) if self.clid_db else None,
            "seed": self.seed,
            "algorithms": [
                {"kind": s.kind, "name": s.name, "params": dict(s.params)} for s in self.algorithms
            ],
        }


def _int(value: str, what: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"line {line}: {what} must be an integer, got {value!r}") from None


def _mode(value: str, where: str) -> Mode:
    try:
        return Mode(value)
    except ValueError:
        supported = ", ".join(m.value for m in Mode)
        raise ConfigError(f"{where}: unknown mode {value!r} (expected {supported})") from None


def parse_pipeline_config(text: str, source: Optional[Path] = None) -> PipelineConfig:
    """Parse the line grammar."""
    config = PipelineConfig(source=source)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        directive, *args = line.split()

        if directive == "ALG":
            if len(args) < 2:
                raise ConfigError(f"line {lineno}: expected 'ALG <kind> <instance_name> [param=value ...]'")
            kind, name, *pairs = args
            params = {}
            for pair in pairs:
                key, sep, value = pair.partition("=")
                if not sep or not key:
                    raise ConfigError(f"line {lineno}: parameter {pair!r} is not 'name=value'")
                params[key] = value
            config.algorithms.append(AlgorithmSpec(kind, name, params, lineno))
        elif directive in ("EVENTS", "MODE", "OUT", "IN", "CLIDDB", "SEED"):
            if len(args) != 1:
                raise ConfigError(f"line {lineno}: {directive} takes exactly one value")
            value = args[0]
            if directive == "EVENTS":
                config.events = _int(value, "EVENTS", lineno)
            elif directive == "MODE":
                config.mode = _mode(value, f"line {lineno}")
            elif directive == "OUT":
                config.output = config.resolve(value)
            elif directive == "IN":
                config.input = config.resolve(value)
            elif directive == "CLIDDB":
                config.clid_db = config.resolve(value)
            else:
                config.seed = _int(value, "SEED", lineno)
        else:
            raise ConfigError(f"line {lineno}: unknown directive '{directive}'")

    return config.validate()


def _from_mapping(data: Any, source: Optional[Path]) -> PipelineConfig:
    if not isinstance(data, dict):
        raise ConfigError("pipeline configuration must be a mapping")
    config = PipelineConfig(source=source)

    for index, entry in enumerate(data.get("algorithms") or [], start=1):
        if not isinstance(entry, dict) or "kind" not in entry or "name" not in entry:
            raise ConfigError(f"algorithm #{index} needs 'kind' and 'name'")
        params = {str(k): str(v) for k, v in (entry.get("params") or {}).items()}
        config.algorithms.append(AlgorithmSpec(str(entry["kind"]), str(entry["name"]), params, index))

    if data.get("events") is not None:
        config.events = _int(str(data["events"]), "events", 0)
    if data.get("mode") is not None:
        config.mode = _mode(str(data["mode"]), "mode")
    if data.get("out"):
        config.output = config.resolve(data["out"])
    if data.get("in"):
        config.input = config.resolve(data["in"])
    if data.get("clid_db"):
        config.clid_db = config.resolve(data["clid_db"])
    if data.get("seed") is not None:
        config.seed = _int(str(data["seed"]), "seed", 0)
    return config.validate()


def load_pipeline_config(path: Union[str, Path]) -> PipelineConfig:
    """Load a pipeline configuration file, by suffix: YAML, TOML or the line grammar."""
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(path, e) from e

    source = path.resolve()
    if path.suffix in (".yaml", ".yml"):
        try:
            data = yaml.safe_load(content) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: {e}") from e
        return _from_mapping(data, source)
    if path.suffix == ".toml":
        try:
            data = toml.loads(content)
        except toml.TomlDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e
        return _from_mapping(data, source)
    return parse_pipeline_config(content, source)
