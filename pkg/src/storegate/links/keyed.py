"""Keyed indexing for associative containers.

An element of a mapping is its ``(key, value)`` entry; the index is the
canonical encoding of the key.
"""

from typing import Any

from ..errors import ElementNotInContainer, IndexOutOfRange, InvalidKey
from ..keys import key_text, validate_key
from .base import IndexingPolicy


class KeyedIndexing(IndexingPolicy):
    name = "keyed"
    kinds = ("mapping",)

    def index_of(self, container: Any, element: Any) -> bytes:
        if not (isinstance(element, tuple) and len(element) == 2):
            raise ElementNotInContainer("mapping elements are (key, value) entries")
        key, value = element
        if key not in container or container[key] != value:
            raise ElementNotInContainer(f"entry {key!r} is not in this mapping")
        return validate_key(key)

    def element_at(self, container: Any, index: bytes) -> Any:
        try:
            text = index.decode("utf-8")
        except UnicodeDecodeError:
            raise IndexOutOfRange(f"{index!r} is not a key encoding") from None
        if text in container:
            return (text, container[text])
        for key in container:
            try:
                if key_text(key) == text:
                    return (key, container[key])
            except InvalidKey:
                continue
        raise IndexOutOfRange(f"no key {text!r} in this mapping")
