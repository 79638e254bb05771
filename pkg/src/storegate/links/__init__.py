"""Persistable links and the indexing policies behind them."""

from collections.abc import Mapping, Sequence
from typing import Any

from ..clid import class_registry
from ..errors import NoPolicyForKind
from .base import IndexingPolicy
from .graph import NodeIdIndexing
from .keyed import KeyedIndexing
from .positional import PositionalIndexing

__all__ = [
    "IndexingPolicy",
    "PositionalIndexing",
    "KeyedIndexing",
    "NodeIdIndexing",
    "ElementLink",
    "ElementLinkVector",
    "ObjectLink",
    "make_element_link",
    "make_object_link",
    "link_to_persistent",
    "link_from_persistent",
    "object_link_from_persistent",
    "default_indexing_for",
    "register_indexing",
    "unregister_indexing",
    "kind_of",
]


INDEXING_POLICIES: dict[str, IndexingPolicy] = {
    "sequence": PositionalIndexing(),
    "mapping": KeyedIndexing(),
    "graph": NodeIdIndexing(),
}


def register_indexing(kind: str, policy: IndexingPolicy) -> None:
    """Make ``policy`` the default for containers of ``kind``."""
    if not policy.applicable_to(kind):
        raise NoPolicyForKind(f"{policy!r} indexes {', '.join(policy.kinds)} containers, not '{kind}'")
    INDEXING_POLICIES[kind] = policy


def unregister_indexing(kind: str) -> None:
    INDEXING_POLICIES.pop(kind, None)


def kind_of(container: Any) -> str:
    """Container kind: the registered kind of its type, else sequence/mapping by protocol."""
    if class_registry.is_registered(type(container)):
        kind = class_registry.info(type(container)).kind
        if kind:
            return kind
    if isinstance(container, Mapping):
        return "mapping"
    if isinstance(container, Sequence) and not isinstance(container, (str, bytes)):
        return "sequence"
    return type(container).__name__


def default_indexing_for(kind: str) -> IndexingPolicy:
    """Indexing policy for a container kind."""
    policy = INDEXING_POLICIES.get(kind)
    if policy is None:
        supported = ", ".join(sorted(INDEXING_POLICIES))
        raise NoPolicyForKind(
            f"no indexing policy for container kind '{kind}'; provide a matching indexing "
            f"policy with register_indexing(). Registered kinds: {supported}"
        )
    return policy


# imported last: element.py needs the policy registry above
from .element import (  # noqa: E402
    ElementLink,
    ElementLinkVector,
    ObjectLink,
    link_from_persistent,
    link_to_persistent,
    make_element_link,
    make_object_link,
    object_link_from_persistent,
)
