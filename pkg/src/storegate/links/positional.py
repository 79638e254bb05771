"""Positional indexing for sequence containers."""

from typing import Any

from ..errors import ElementNotInContainer, IndexOutOfRange
from .base import IndexingPolicy


class PositionalIndexing(IndexingPolicy):
    """Index is the zero-based position, written in decimal."""

    name = "positional"
    kinds = ("sequence",)

    def index_of(self, container: Any, element: Any) -> bytes:
        # identity first so equal duplicates link to the element actually given
        for position, candidate in enumerate(container):
            if candidate is element:
                return str(position).encode("ascii")
        for position, candidate in enumerate(container):
            if candidate == element:
                return str(position).encode("ascii")
        raise ElementNotInContainer(f"{element!r} is not an element of this sequence")

    def element_at(self, container: Any, index: bytes) -> Any:
        if not (index.isascii() and index.isdigit()):
            raise IndexOutOfRange(f"{index!r} is not a position")
        position = int(index)
        if position >= len(container):
            raise IndexOutOfRange(f"position {position} beyond sequence of length {len(container)}")
        return container[position]
