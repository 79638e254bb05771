"""Base indexing policy interface."""

from abc import ABC, abstractmethod
from typing import Any


class IndexingPolicy(ABC):
    """Maps a container element to a persistable index and back.

    For every element ``e`` of a container ``c``,
    ``element_at(c, index_of(c, e))`` must give back ``e``.
    """

    name: str = "base"
    kinds: tuple[str, ...] = ()

    @abstractmethod
    def index_of(self, container: Any, element: Any) -> bytes:
        """Canonical index encoding of ``element`` inside ``container``."""
        pass

    @abstractmethod
    def element_at(self, container: Any, index: bytes) -> Any:
        """Element of ``container`` at ``index``."""
        pass

    def applicable_to(self, kind: str) -> bool:
        """A policy without declared kinds accepts any kind."""
        return not self.kinds or kind in self.kinds

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"
