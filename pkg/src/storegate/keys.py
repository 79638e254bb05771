"""User key types.

A key must be strictly ordered and persistable: it has a canonical byte
encoding and a decoding that inverts it. Plain strings encode as their UTF-8
bytes; other key types go through a :class:`KeyAdapter`. Static checkers see
the ordering requirement through the :class:`KeyContract` protocol, the rest
is verified by :func:`validate_key` on use.
"""

from abc import ABC, abstractmethod
from typing import Any, Optional, Protocol, runtime_checkable

from .errors import InvalidKey


@runtime_checkable
class KeyContract(Protocol):
    """What a key type must provide beyond its adapter: strict ordering."""

    def __lt__(self, other: Any) -> bool: ...


class KeyAdapter(ABC):
    """Canonical encoding for one key type."""

    name: str = "base"

    @abstractmethod
    def encode(self, key: Any) -> bytes:
        pass

    @abstractmethod
    def decode(self, data: bytes) -> Any:
        pass


class StringKey(KeyAdapter):
    """Strings encode as themselves."""

    name = "str"

    def encode(self, key: str) -> bytes:
        return key.encode("utf-8")

    def decode(self, data: bytes) -> str:
        return data.decode("utf-8")


class IntKey(KeyAdapter):
    """Integers encode as their decimal representation, e.g. ``42`` -> ``b"42"``."""

    name = "int"

    def encode(self, key: int) -> bytes:
        return str(key).encode("ascii")

    def decode(self, data: bytes) -> int:
        return int(data.decode("ascii"))


class ProtocolKey(KeyAdapter):
    """Adapter for classes implementing ``__sg_encode__`` / ``__sg_decode__``."""

    name = "protocol"

    def __init__(self, key_type: type):
        self.key_type = key_type

    def encode(self, key: Any) -> bytes:
        return key.__sg_encode__()

    def decode(self, data: bytes) -> Any:
        return self.key_type.__sg_decode__(data)


KEY_ADAPTERS: dict[type, KeyAdapter] = {
    str: StringKey(),
    int: IntKey(),
}


def register_key_adapter(key_type: type, adapter: KeyAdapter) -> None:
    KEY_ADAPTERS[key_type] = adapter


def adapter_for(key: Any) -> KeyAdapter:
    """Find the adapter for a key value, walking the MRO of its type."""
    if isinstance(key, bool):
        raise InvalidKey("booleans are not valid keys")
    for klass in type(key).__mro__:
        adapter = KEY_ADAPTERS.get(klass)
        if adapter is not None:
            return adapter
    if hasattr(key, "__sg_encode__") and hasattr(type(key), "__sg_decode__"):
        return ProtocolKey(type(key))
    raise InvalidKey(f"no key adapter for type {type(key).__qualname__}")


def validate_key(key: Any, adapter: Optional[KeyAdapter] = None) -> bytes:
    """Check ``key`` against the key contract and return its canonical encoding."""
    if adapter is None and type(key) is str:
        return _validate_str(key)

    adapter = adapter or adapter_for(key)

    try:
        if key < key:
            raise InvalidKey(f"key {key!r}: ordering is not strict")
    except TypeError as e:
        raise InvalidKey(f"key {key!r} is not ordered: {e}") from e

    try:
        data = adapter.encode(key)
    except Exception as e:
        raise InvalidKey(f"key {key!r} cannot be encoded: {e}") from e
    if not isinstance(data, bytes) or not data:
        raise InvalidKey(f"key {key!r}: encoding must be non-empty bytes")
    try:
        data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InvalidKey(f"key {key!r}: encoding is not UTF-8") from e

    try:
        back = adapter.decode(data)
    except Exception as e:
        raise InvalidKey(f"key {key!r}: encoding does not decode: {e}") from e
    try:
        same = back == key and not (back < key) and not (key < back)
    except TypeError:
        same = False
    if not same:
        raise InvalidKey(f"key {key!r}: decode(encode(k)) gives {back!r}")
    return data


def _validate_str(key: str) -> bytes:
    if not key:
        raise InvalidKey("key must not be empty")
    try:
        return key.encode("utf-8")
    except UnicodeEncodeError as e:
        raise InvalidKey(f"key {key!r} is not valid text") from e


def key_text(key: Any, adapter: Optional[KeyAdapter] = None) -> str:
    """Canonical encoding as text; this is what a StoreKey holds."""
    if adapter is None and type(key) is str and key:
        return key
    return validate_key(key, adapter).decode("utf-8")
