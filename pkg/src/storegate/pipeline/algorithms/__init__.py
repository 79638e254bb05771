"""Built-in algorithm kinds and the catalog that instantiates them by name."""

from .base import AlgContext, Algorithm
from .clusters import ClusterMaker
from .linking import LinkBuilder
from .tracks import TrackCalibrator, TrackMaker, TrackSelector
from .writer import StoreWriter
from ...errors import ConfigError

__all__ = [
    "AlgContext",
    "Algorithm",
    "ClusterMaker",
    "LinkBuilder",
    "StoreWriter",
    "TrackCalibrator",
    "TrackMaker",
    "TrackSelector",
    "builtin_algorithms",
    "create_algorithm",
    "get_algorithm",
    "register_algorithm",
]


ALGORITHM_KINDS: dict[str, type[Algorithm]] = {
    "TrackMaker": TrackMaker,
    "ClusterMaker": ClusterMaker,
    "TrackSelector": TrackSelector,
    "TrackCalibrator": TrackCalibrator,
    "LinkBuilder": LinkBuilder,
    "StoreWriter": StoreWriter,
}


def get_algorithm(kind: str) -> type[Algorithm]:
    """Algorithm class for ``kind``."""
    algorithm_class = ALGORITHM_KINDS.get(kind)
    if algorithm_class is None:
        supported = ", ".join(sorted(ALGORITHM_KINDS))
        raise ConfigError(f"unknown algorithm kind '{kind}'. Supported: {supported}")
    return algorithm_class


def create_algorithm(kind: str, name: str, params: dict[str, str], base_seed: int = 0) -> Algorithm:
    return get_algorithm(kind)(name, params, base_seed=base_seed)


def register_algorithm(kind: str, algorithm_class: type[Algorithm]) -> None:
    if not (isinstance(algorithm_class, type) and issubclass(algorithm_class, Algorithm)):
        raise TypeError(f"{algorithm_class!r} is not an Algorithm subclass")
    ALGORITHM_KINDS[kind] = algorithm_class


def builtin_algorithms() -> dict[str, dict]:
    """Catalog of available kinds with their documented parameters."""
    return {
        kind: {"description": cls.description, "parameters": dict(cls.parameters)}
        for kind, cls in sorted(ALGORITHM_KINDS.items())
    }
