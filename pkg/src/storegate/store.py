"""The transient event store.

Algorithms record data objects under a (type, key) pair and retrieve them
back by type, by key or as a range over all instances of a type. Each entry
is a :class:`DataProxy`: either valid (holding a :class:`Bucket`) or virtual
(holding a loader run on first dereference). Published entries are locked and
hand out read-only views only.
"""

import logging
from bisect import insort
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterator, NamedTuple, Optional, Union

from .clid import ClassRegistry, class_registry
from .converters import ConverterRegistry, converters as default_converters
from .errors import (
    Ambiguous,
    DuplicateKey,
    InvalidKey,
    LoadFailed,
    Locked,
    NotFound,
    StaleHandle,
    TypeMismatch,
    UnregisteredType,
)
from .keys import KeyAdapter, key_text, validate_key
from .views import const

logger = logging.getLogger(__name__)

Loader = Callable[[], Any]


class Lifetime(str, Enum):
    EVENT = "event"  # dropped when the next event starts
    JOB = "job"      # survives event boundaries


class ClearScope(str, Enum):
    EVENT_ONLY = "event_only"
    ALL = "all"


class StoreKey(NamedTuple):
    """Identifier of one entry: class id plus the canonical key text."""
    class_id: int
    key: str

    def __str__(self) -> str:
        return f"({self.class_id}, {self.key!r})"


def _stable_repr(obj: Any) -> str:
    """``repr`` without memory addresses, for types that have no converter."""
    if isinstance(obj, (list, tuple)):
        inner = ", ".join(_stable_repr(v) for v in obj)
        return f"{type(obj).__qualname__}[{inner}]"
    if isinstance(obj, dict):
        inner = ", ".join(f"{_stable_repr(k)}: {_stable_repr(v)}" for k, v in obj.items())
        return f"{type(obj).__qualname__}{{{inner}}}"
    if type(obj).__repr__ is object.__repr__:
        state = getattr(obj, "__dict__", {})
        fields = ", ".join(f"{name}={_stable_repr(state[name])}" for name in sorted(state))
        return f"{type(obj).__module__}.{type(obj).__qualname__}({fields})"
    return repr(obj)


def _repr_encode(obj: Any) -> bytes:
    return _stable_repr(obj).encode("utf-8")


@dataclass(eq=False)
class Bucket:
    """Type-erased holder of one stored object."""
    class_id: int
    payload: Any
    encoder: Callable[[Any], bytes] = _repr_encode

    def encode(self) -> bytes:
        return self.encoder(self.payload)


class DataProxy:
    """Store entry: valid (bucket) or virtual (loader), plus access state."""

    __slots__ = ("store_key", "bucket", "loader", "locked", "lifetime",
                 "provenance", "load_count", "released")

    def __init__(
        self,
        store_key: StoreKey,
        bucket: Optional[Bucket] = None,
        loader: Optional[Loader] = None,
        lifetime: Lifetime = Lifetime.EVENT,
        provenance: str = "",
        locked: bool = False,
    ):
        self.store_key = store_key
        self.bucket = bucket
        self.loader = loader
        self.locked = locked
        self.lifetime = lifetime
        self.provenance = provenance
        self.load_count = 0
        self.released = False

    @property
    def is_valid(self) -> bool:
        return self.bucket is not None

    @property
    def is_virtual(self) -> bool:
        return self.bucket is None and self.loader is not None

    def release(self) -> None:
        self.bucket = None
        self.loader = None
        self.released = True

    def __repr__(self) -> str:
        state = "valid" if self.is_valid else "virtual"
        return f"DataProxy({self.store_key}, {state}, locked={self.locked})"


class DataHandle:
    """Lazy reference to one proxy, valid for the event it was taken in."""

    __slots__ = ("_store", "_proxy", "_epoch", "type")

    def __init__(self, store: "EventStore", proxy: DataProxy, type_: type):
        self._store = store
        self._proxy = proxy
        self._epoch = store.epoch
        self.type = type_

    @property
    def store_key(self) -> StoreKey:
        return self._proxy.store_key

    @property
    def key(self) -> str:
        return self._proxy.store_key.key

    @property
    def is_materialized(self) -> bool:
        return self._proxy.is_valid

    @property
    def is_stale(self) -> bool:
        return self._epoch != self._store.epoch or self._proxy.released

    def deref(self) -> Any:
        """Read-only view of the object, loading it first if needed."""
        if self.is_stale:
            raise StaleHandle(f"handle to {self.store_key} outlived its event")
        return const(self._store._materialize(self._proxy).payload)

    def __repr__(self) -> str:
        return f"DataHandle({self.type.__name__}, {self.key!r})"


class EventStore:
    """Blackboard of data objects keyed by (class id, key).

    Single writer: mutating calls on one store must not run concurrently.
    """

    def __init__(
        self,
        registry: Optional[ClassRegistry] = None,
        converters: Optional[ConverterRegistry] = None,
        name: str = "StoreGate",
    ):
        self.name = name
        self._registry = registry if registry is not None else class_registry
        self._converters = converters if converters is not None else default_converters
        self._proxies: dict[StoreKey, DataProxy] = {}
        self._type_index: dict[int, list[str]] = {}
        self.epoch = 0
        self.fault_count = 0

    @property
    def registry(self) -> ClassRegistry:
        return self._registry

    @property
    def converters(self) -> ConverterRegistry:
        return self._converters

    def __len__(self) -> int:
        return len(self._proxies)

    def __contains__(self, store_key: object) -> bool:
        return store_key in self._proxies

    # Recording

    def record(
        self,
        obj: Any,
        key: Any = None,
        lifetime: Union[Lifetime, str] = Lifetime.EVENT,
        provenance: str = "",
        adapter: Optional[KeyAdapter] = None,
    ) -> StoreKey:
        """Take ownership of ``obj`` under its type and ``key``.

        Without a key the type's registered name is used.
        """
        info = self._registry.info(type(obj))
        store_key = self._make_key(info.class_id, info.type_name, key, adapter)
        if store_key in self._proxies:
            raise DuplicateKey(f"{info.type_name} already recorded under {store_key.key!r}")

        proxy = DataProxy(
            store_key,
            bucket=self._make_bucket(info.class_id, obj),
            lifetime=Lifetime(lifetime),
            provenance=provenance,
        )
        self._insert(proxy)
        logger.debug("recorded %s %s", info.type_name, store_key)
        return store_key

    def register_loader(
        self,
        type_: type,
        key: Any,
        loader: Loader,
        lifetime: Union[Lifetime, str] = Lifetime.EVENT,
        adapter: Optional[KeyAdapter] = None,
    ) -> StoreKey:
        """Install a virtual proxy whose object is produced by ``loader`` on first use."""
        info = self._registry.info(type_)
        store_key = self._make_key(info.class_id, info.type_name, key, adapter)
        if store_key in self._proxies:
            raise DuplicateKey(f"{info.type_name} already present under {store_key.key!r}")
        self._insert(DataProxy(store_key, loader=loader, lifetime=Lifetime(lifetime)))
        return store_key

    def _make_key(self, class_id: int, type_name: str, key: Any,
                  adapter: Optional[KeyAdapter]) -> StoreKey:
        if key is None:
            return StoreKey(class_id, type_name)
        return StoreKey(class_id, validate_key(key, adapter).decode("utf-8"))

    def _make_bucket(self, class_id: int, obj: Any) -> Bucket:
        converter = self._converters.find(class_id)
        return Bucket(class_id, obj, converter.encode if converter else _repr_encode)

    def _insert(self, proxy: DataProxy) -> None:
        store_key = proxy.store_key
        self._proxies[store_key] = proxy
        insort(self._type_index.setdefault(store_key.class_id, []), store_key.key)

    # Retrieval

    def retrieve(self, type_: type, key: Any = None, adapter: Optional[KeyAdapter] = None) -> Any:
        """Read-only view of an object.

        Without a key: the only instance of the type, or the one under the
        default key when there are several.
        """
        class_id, proxy = self._locate(type_, key, adapter)
        bucket = self._materialize(proxy)
        if bucket.class_id != class_id:
            raise TypeMismatch(f"{proxy.store_key} holds class id {bucket.class_id}")
        return const(bucket.payload)

    def retrieve_mut(self, type_: type, key: Any = None, adapter: Optional[KeyAdapter] = None) -> Any:
        """Writable access, refused once the object is published."""
        class_id, proxy = self._locate(type_, key, adapter)
        # virtual proxies load as published objects
        if proxy.locked or not proxy.is_valid:
            raise Locked(f"{type_.__name__} {proxy.store_key.key!r} is published and read-only")
        if proxy.bucket.class_id != class_id:
            raise TypeMismatch(f"{proxy.store_key} holds class id {proxy.bucket.class_id}")
        return proxy.bucket.payload

    def retrieve_key(self, store_key: StoreKey, type_: Optional[type] = None) -> Any:
        """Read-only view of the object at an exact store key."""
        bucket = self.bucket(store_key)
        if type_ is not None and bucket.class_id != self._registry.clid_of(type_):
            raise TypeMismatch(f"{store_key} is not a {type_.__name__}")
        return const(bucket.payload)

    def bucket(self, store_key: StoreKey) -> Bucket:
        """Bucket at ``store_key``, materializing a virtual proxy."""
        proxy = self._proxies.get(store_key)
        if proxy is None:
            raise NotFound(f"nothing recorded at {StoreKey(*store_key)}")
        return self._materialize(proxy)

    def retrieve_range(self, type_: type) -> list[DataHandle]:
        """One handle per instance of ``type_``, ordered by key encoding."""
        if not self._registry.is_registered(type_):
            return []
        class_id = self._registry.clid_of(type_)
        return [
            DataHandle(self, self._proxies[StoreKey(class_id, key)], type_)
            for key in self._type_index.get(class_id, ())
        ]

    def contains(self, type_: type, key: Any = None, adapter: Optional[KeyAdapter] = None) -> bool:
        if not self._registry.is_registered(type_):
            return False
        info = self._registry.info(type_)
        try:
            text = info.type_name if key is None else key_text(key, adapter)
        except InvalidKey:
            return False
        return (info.class_id, text) in self._proxies

    def keys_of(self, type_: type) -> list[str]:
        if not self._registry.is_registered(type_):
            return []
        return list(self._type_index.get(self._registry.clid_of(type_), ()))

    def provenance_of(self, type_: type, key: Any = None, adapter: Optional[KeyAdapter] = None) -> str:
        return self._locate(type_, key, adapter)[1].provenance

    def proxy(self, store_key: StoreKey) -> DataProxy:
        proxy = self._proxies.get(store_key)
        if proxy is None:
            raise NotFound(f"nothing recorded at {StoreKey(*store_key)}")
        return proxy

    def store_keys(self) -> list[StoreKey]:
        """All keys, ascending by (class id, key encoding)."""
        return sorted(self._proxies)

    def proxies(self) -> Iterator[DataProxy]:
        return iter(self._proxies.values())

    def _locate(self, type_: type, key: Any, adapter: Optional[KeyAdapter]) -> tuple[int, DataProxy]:
        info = self._registry.info(type_)
        class_id = info.class_id
        if key is None:
            keys = self._type_index.get(class_id)
            if not keys:
                raise NotFound(f"no {info.type_name} in the store")
            if len(keys) == 1:
                return class_id, self._proxies[StoreKey(class_id, keys[0])]
            proxy = self._proxies.get(StoreKey(class_id, info.type_name))
            if proxy is None:
                raise Ambiguous(
                    f"{len(keys)} instances of {info.type_name} and none under the default key"
                )
            return class_id, proxy

        proxy = self._proxies.get((class_id, key_text(key, adapter)))
        if proxy is None:
            raise NotFound(f"no {info.type_name} under key {key!r}")
        return class_id, proxy

    def _materialize(self, proxy: DataProxy) -> Bucket:
        if proxy.bucket is not None:
            return proxy.bucket
        if proxy.loader is None:
            raise StaleHandle(f"{proxy.store_key} has been cleared")

        try:
            obj = proxy.loader()
        except Exception as e:
            # stays virtual; the next access retries
            logger.debug("loader for %s failed: %s", proxy.store_key, e)
            raise LoadFailed(proxy.store_key, e) from e

        class_id = proxy.store_key.class_id
        try:
            actual = self._registry.clid_of(type(obj))
        except UnregisteredType as e:
            raise LoadFailed(proxy.store_key, e) from e
        if actual != class_id:
            raise TypeMismatch(f"loader for {proxy.store_key} produced class id {actual}")

        proxy.bucket = self._make_bucket(class_id, obj)
        proxy.loader = None
        proxy.locked = True
        proxy.load_count += 1
        self.fault_count += 1
        logger.debug("cache fault served for %s", proxy.store_key)
        return proxy.bucket

    # Access control

    def lock(self, store_key: StoreKey) -> None:
        self.proxy(store_key).locked = True

    def lock_new(self, provenance: str = "") -> int:
        """Lock every unlocked valid proxy, making ``provenance`` its publisher."""
        count = 0
        for proxy in self._proxies.values():
            if proxy.locked or proxy.bucket is None:
                continue
            proxy.locked = True
            if not proxy.provenance:
                proxy.provenance = provenance
            count += 1
        if count:
            logger.debug("%s published %d object(s)", provenance or "<anonymous>", count)
        return count

    # Lifetime

    def clear(self, scope: Union[ClearScope, str] = ClearScope.EVENT_ONLY) -> int:
        """Drop event-lifetime entries (or everything) and start a new epoch."""
        scope = ClearScope(scope)
        if scope is ClearScope.ALL:
            doomed = list(self._proxies)
        else:
            doomed = [k for k, p in self._proxies.items() if p.lifetime is Lifetime.EVENT]

        for store_key in doomed:
            self._proxies.pop(store_key).release()

        self._type_index = {}
        for store_key in self._proxies:
            self._type_index.setdefault(store_key.class_id, []).append(store_key.key)
        for keys in self._type_index.values():
            keys.sort()

        self.epoch += 1
        logger.debug("cleared %d entries (%s), epoch now %d", len(doomed), scope.value, self.epoch)
        return len(doomed)

    def audit(self) -> list[str]:
        """Consistency problems between the type index and the proxy map."""
        problems = []
        projection: dict[int, list[str]] = {}
        for store_key in self._proxies:
            projection.setdefault(store_key.class_id, []).append(store_key.key)
        for class_id in set(projection) | set(self._type_index):
            expected = sorted(projection.get(class_id, []))
            actual = self._type_index.get(class_id, [])
            if not actual and not expected:
                continue
            if actual != expected:
                problems.append(f"class id {class_id}: index {actual} != proxies {expected}")
        return problems

    def __repr__(self) -> str:
        return f"EventStore({self.name!r}, entries={len(self)}, epoch={self.epoch})"
