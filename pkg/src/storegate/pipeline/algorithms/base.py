"""Base algorithm interface and the store view algorithms work through."""

import logging
from abc import ABC, abstractmethod
from typing import Any, Optional

from ...errors import ConfigError, Locked
from ...links import ElementLink, make_element_link
from ...persistence import ImageWriter
from ...store import DataHandle, EventStore, Lifetime, StoreKey

logger = logging.getLogger(__name__)


class AlgContext:
    """One algorithm's access to the event.

    Only blackboard calls are offered: algorithms never see each other, just
    the data objects they leave in the store.
    """

    def __init__(self, store: EventStore, name: str, event: int, lifetime: Lifetime = Lifetime.EVENT):
        self._store = store
        self.name = name
        self.event = event
        self.lifetime = lifetime
        self.recorded: list[StoreKey] = []
        self.retrieves = 0
        self.locked_refusals = 0

    def record(self, obj: Any, key: Any = None) -> StoreKey:
        """Record ``obj``; the key defaults to this algorithm's instance name."""
        store_key = self._store.record(obj, self.name if key is None else key, lifetime=self.lifetime)
        self.recorded.append(store_key)
        return store_key

    def retrieve(self, type_: type, key: Any = None) -> Any:
        self.retrieves += 1
        return self._store.retrieve(type_, key)

    def retrieve_mut(self, type_: type, key: Any = None) -> Any:
        self.retrieves += 1
        try:
            return self._store.retrieve_mut(type_, key)
        except Locked:
            self.locked_refusals += 1
            raise

    def retrieve_range(self, type_: type) -> list[DataHandle]:
        self.retrieves += 1
        return self._store.retrieve_range(type_)

    def contains(self, type_: type, key: Any = None) -> bool:
        return self._store.contains(type_, key)

    def make_element_link(self, container_type: type, container_key: Any, element: Any) -> ElementLink:
        return make_element_link(self._store, container_type, container_key, element)

    def persist(self, writer: ImageWriter) -> int:
        """Write the event's store contents (for output algorithms)."""
        return writer.write_event(self._store, self.event)


class Algorithm(ABC):
    """Base class for pipeline algorithms.

    Subclasses document their parameters in ``parameters`` and read them in
    :meth:`configure`.
    """

    kind: str = "base"
    description: str = ""
    parameters: dict[str, str] = {}

    def __init__(self, name: str, params: Optional[dict[str, str]] = None, base_seed: int = 0):
        self.name = name
        self.params = dict(params or {})
        self.base_seed = base_seed
        unknown = set(self.params) - set(self.parameters) - {"lifetime"}
        if unknown:
            raise ConfigError(f"{self.kind} '{name}': unknown parameter(s) {', '.join(sorted(unknown))}")
        self.configure()

    def configure(self) -> None:
        pass

    def initialize(self) -> None:
        pass

    @abstractmethod
    def execute(self, ctx: AlgContext) -> None:
        """Process one event."""
        pass

    def finalize(self) -> None:
        pass

    def param_str(self, name: str, default: Optional[str] = None, required: bool = False) -> Optional[str]:
        value = self.params.get(name, default)
        if required and value is None:
            raise ConfigError(f"{self.kind} '{self.name}': parameter '{name}' is required")
        return value

    def param_int(self, name: str, default: int) -> int:
        value = self.params.get(name)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{self.kind} '{self.name}': {name} must be an integer, got {value!r}") from None

    def param_float(self, name: str, default: float) -> float:
        value = self.params.get(name)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{self.kind} '{self.name}': {name} must be a number, got {value!r}") from None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"
