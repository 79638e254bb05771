"""Object and element links.

A link stores where its target lives (the container's store key and, for
element links, an index) instead of a pointer, so it can be written to disk
and resolved later through the store. Resolution goes through the store's
proxies: linking to an object that was never loaded triggers the same cache
fault as a retrieve. Resolved targets are cached for the current event.

Persistent records::

    LINK <class_id> <base64(container key)> <base64(index)>
    OLINK <class_id> <base64(key)>
"""

import base64
import binascii
from dataclasses import dataclass, field
from typing import Any, Optional

from ..clid import class_registry, storable
from ..converters import Converter, converters
from ..errors import NotFound, ParseError
from ..keys import KeyAdapter, key_text
from ..store import EventStore, StoreKey
from ..views import const, unwrap
from . import default_indexing_for, kind_of

LINK_TAG = "LINK"
OBJECT_LINK_TAG = "OLINK"


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _unb64(token: str, line: int) -> bytes:
    try:
        return base64.b64decode(token.encode("ascii"), validate=True)
    except (binascii.Error, UnicodeEncodeError) as e:
        raise ParseError(line, f"bad base64 token {token!r}") from e


def _class_id(token: str, line: int) -> int:
    if not (token.isascii() and token.isdigit()):
        raise ParseError(line, f"bad class id {token!r}")
    return int(token)


@dataclass
class _Resolved:
    store: EventStore
    epoch: int
    view: Any


def _cached(cache: Optional[_Resolved], store: EventStore) -> Optional[Any]:
    if cache is not None and cache.store is store and cache.epoch == store.epoch:
        return cache.view
    return None


@dataclass
class ObjectLink:
    """Persistable reference to a whole data object."""
    target: StoreKey
    store: Optional[EventStore] = field(default=None, compare=False, repr=False)
    _cache: Optional[_Resolved] = field(default=None, compare=False, repr=False)

    def bind(self, store: EventStore) -> "ObjectLink":
        self.store = store
        return self

    def resolve(self, store: Optional[EventStore] = None) -> Any:
        store = _bound(store, self.store, self.target)
        view = _cached(self._cache, store)
        if view is None:
            view = store.retrieve_key(self.target)
            self._cache = _Resolved(store, store.epoch, view)
        return view

    def to_persistent(self) -> str:
        return f"{OBJECT_LINK_TAG} {self.target.class_id} {_b64(self.target.key.encode('utf-8'))}"


@dataclass
class ElementLink:
    """Persistable reference to an element inside a stored container."""
    container: StoreKey
    index: bytes
    store: Optional[EventStore] = field(default=None, compare=False, repr=False)
    _cache: Optional[_Resolved] = field(default=None, compare=False, repr=False)

    def bind(self, store: EventStore) -> "ElementLink":
        self.store = store
        return self

    def resolve(self, store: Optional[EventStore] = None) -> Any:
        """Read-only view of the linked element."""
        store = _bound(store, self.store, self.container)
        view = _cached(self._cache, store)
        if view is None:
            payload = store.bucket(self.container).payload
            policy = default_indexing_for(kind_of(payload))
            view = const(policy.element_at(payload, self.index))
            self._cache = _Resolved(store, store.epoch, view)
        return view

    def to_persistent(self) -> str:
        return (f"{LINK_TAG} {self.container.class_id} "
                f"{_b64(self.container.key.encode('utf-8'))} {_b64(self.index)}")


def _bound(store: Optional[EventStore], bound: Optional[EventStore], target: StoreKey) -> EventStore:
    store = store if store is not None else bound
    if store is None:
        raise NotFound(f"link to {target} is not bound to a store")
    return store


def _container_key(store: EventStore, type_: type, key: Any, adapter: Optional[KeyAdapter]) -> StoreKey:
    info = store.registry.info(type_)
    text = info.type_name if key is None else key_text(key, adapter)
    return StoreKey(info.class_id, text)


def make_element_link(
    store: EventStore,
    container_type: type,
    container_key: Any,
    element: Any,
    adapter: Optional[KeyAdapter] = None,
) -> ElementLink:
    """Link to ``element`` of the container recorded under ``container_key``.

    The index comes from the default indexing policy of the container's kind.
    """
    store_key = _container_key(store, container_type, container_key, adapter)
    payload = store.bucket(store_key).payload
    policy = default_indexing_for(kind_of(payload))
    index = policy.index_of(payload, unwrap(element))
    return ElementLink(store_key, index, store=store)


def make_object_link(
    store: EventStore,
    type_: type,
    key: Any = None,
    adapter: Optional[KeyAdapter] = None,
) -> ObjectLink:
    store_key = _container_key(store, type_, key, adapter)
    if store_key not in store:
        raise NotFound(f"no {type_.__name__} under key {store_key.key!r}")
    return ObjectLink(store_key, store=store)


def link_to_persistent(link: Any) -> str:
    return link.to_persistent()


def link_from_persistent(record: str, store: Optional[EventStore] = None, line: int = 1) -> ElementLink:
    """Rebuild an element link from its record; nothing is resolved yet."""
    parts = record.split(" ")
    if len(parts) != 4 or parts[0] != LINK_TAG:
        raise ParseError(line, f"expected '{LINK_TAG} <class_id> <key> <index>', got {record!r}")
    key = _unb64(parts[2], line)
    index = _unb64(parts[3], line)
    if not key or not index:
        raise ParseError(line, "empty key or index in link record")
    try:
        text = key.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(line, "link key is not UTF-8") from e
    return ElementLink(StoreKey(_class_id(parts[1], line), text), index, store=store)


def object_link_from_persistent(record: str, store: Optional[EventStore] = None, line: int = 1) -> ObjectLink:
    parts = record.split(" ")
    if len(parts) != 3 or parts[0] != OBJECT_LINK_TAG:
        raise ParseError(line, f"expected '{OBJECT_LINK_TAG} <class_id> <key>', got {record!r}")
    key = _unb64(parts[2], line)
    try:
        text = key.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(line, "link key is not UTF-8") from e
    if not text:
        raise ParseError(line, "empty key in link record")
    return ObjectLink(StoreKey(_class_id(parts[1], line), text), store=store)


@storable(kind="sequence")
class ElementLinkVector(list):
    """Storable collection of element links."""

    def bind(self, store: EventStore) -> "ElementLinkVector":
        for link in self:
            link.bind(store)
        return self

    def __repr__(self) -> str:
        return f"ElementLinkVector({list.__repr__(self)})"


def encode_link_vector(links: ElementLinkVector) -> bytes:
    """``<count>`` then one LINK record per line."""
    lines = [str(len(links))] + [link.to_persistent() for link in links]
    return "\n".join(lines).encode("utf-8")


def decode_link_vector(data: bytes) -> ElementLinkVector:
    lines = data.decode("utf-8").split("\n")
    count = int(lines[0])
    records = lines[1:]
    if len(records) != count:
        raise ValueError(f"link vector announces {count} links, has {len(records)}")
    return ElementLinkVector(
        link_from_persistent(record, line=i) for i, record in enumerate(records, start=2)
    )


def _probe_links() -> ElementLinkVector:
    return ElementLinkVector([ElementLink(StoreKey(300, "probe"), b"0")])


converters.register(Converter(
    class_registry.clid_of(ElementLinkVector),
    ElementLinkVector,
    encode_link_vector,
    decode_link_vector,
    probe=_probe_links,
    carries_links=True,
))
