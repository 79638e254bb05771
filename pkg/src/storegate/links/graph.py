"""Node-id indexing for graph containers such as :class:`storegate.edm.ToyGraph`."""

from typing import Any

from ..errors import ElementNotInContainer, IndexOutOfRange
from .base import IndexingPolicy


class NodeIdIndexing(IndexingPolicy):
    """Index is the node's integer id. Works with anything exposing ``nodes: {id: node}``."""

    name = "node-id"
    kinds = ("graph",)

    def index_of(self, container: Any, element: Any) -> bytes:
        node_id = getattr(element, "id", None)
        if node_id is None or container.nodes.get(node_id) != element:
            raise ElementNotInContainer(f"{element!r} is not a node of this graph")
        return str(node_id).encode("ascii")

    def element_at(self, container: Any, index: bytes) -> Any:
        try:
            node_id = int(index.decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            raise IndexOutOfRange(f"{index!r} is not a node id") from None
        node = container.nodes.get(node_id)
        if node is None:
            raise IndexOutOfRange(f"no node {node_id} in this graph")
        return node
