"""Toy event data model.

Collections of tracks and clusters, plain numeric sequences, string-keyed
maps and a small directed graph. The values carry no physical meaning; they
are cargo for exercising the store, links and persistence.

Every type here is registered with a class id and gets a converter that
writes a compact JSON array (or object) with fields in the documented order.
Python's float repr is the shortest string that round-trips, so decoding
reproduces the exact value.
"""

import json
import math
from dataclasses import dataclass
from typing import Any, Iterator

from .clid import class_registry, storable
from .converters import Converter, ConverterRegistry, converters


@storable
@dataclass(frozen=True)
class Track:
    """Fields in encoding order: id, px, py, pz, quality."""
    id: int
    px: float
    py: float
    pz: float
    quality: float

    @property
    def pt(self) -> float:
        return math.hypot(self.px, self.py)

    def to_list(self) -> list:
        return [self.id, self.px, self.py, self.pz, self.quality]


@storable(kind="sequence")
class TrackCollection(list):
    """Sequence of :class:`Track`."""

    def __repr__(self) -> str:
        return f"TrackCollection({list.__repr__(self)})"


@storable
@dataclass(frozen=True)
class Cluster:
    """Fields in encoding order: id, energy, eta, phi."""
    id: int
    energy: float
    eta: float
    phi: float

    def to_list(self) -> list:
        return [self.id, self.energy, self.eta, self.phi]


@storable(kind="sequence")
class ClusterCollection(list):
    """Sequence of :class:`Cluster`."""

    def __repr__(self) -> str:
        return f"ClusterCollection({list.__repr__(self)})"


@storable(kind="sequence")
class NumberSequence(list):
    """Sequence of ints and floats."""

    def __repr__(self) -> str:
        return f"NumberSequence({list.__repr__(self)})"


@storable(kind="mapping")
class StringMap(dict):
    """Map from string keys to numbers or strings."""

    def __repr__(self) -> str:
        return f"StringMap({dict.__repr__(self)})"


@dataclass(frozen=True)
class GraphNode:
    id: int
    label: str = ""


@storable(kind="graph")
class ToyGraph:
    """Directed graph with stable integer node ids."""

    __sg_mutators__ = frozenset({"add_node", "add_edge"})

    def __init__(self):
        self.nodes: dict[int, GraphNode] = {}
        self.edges: list[tuple[int, int]] = []

    def add_node(self, node_id: int, label: str = "") -> GraphNode:
        if node_id in self.nodes:
            raise ValueError(f"node {node_id} already in graph")
        node = GraphNode(node_id, label)
        self.nodes[node_id] = node
        return node

    def add_edge(self, source: int, target: int) -> None:
        if source not in self.nodes or target not in self.nodes:
            raise ValueError(f"edge {source}->{target} refers to a missing node")
        self.edges.append((source, target))

    def node(self, node_id: int) -> GraphNode:
        return self.nodes[node_id]

    def successors(self, node_id: int) -> list[int]:
        return [t for s, t in self.edges if s == node_id]

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[GraphNode]:
        return iter(sorted(self.nodes.values(), key=lambda n: n.id))

    def __contains__(self, node: object) -> bool:
        return isinstance(node, GraphNode) and self.nodes.get(node.id) == node

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ToyGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    __hash__ = None

    def __repr__(self) -> str:
        return f"ToyGraph(nodes={len(self.nodes)}, edges={len(self.edges)})"


def _dump(value: Any) -> bytes:
    return json.dumps(value, separators=(",", ":"), sort_keys=True).encode("utf-8")


def _load(data: bytes) -> Any:
    return json.loads(data.decode("utf-8"))


def _decode_track(data: bytes) -> Track:
    return Track(*_load(data))


def _decode_tracks(data: bytes) -> TrackCollection:
    return TrackCollection(Track(*fields) for fields in _load(data))


def _decode_clusters(data: bytes) -> ClusterCollection:
    return ClusterCollection(Cluster(*fields) for fields in _load(data))


def _encode_graph(graph: ToyGraph) -> bytes:
    return _dump({
        "edges": [list(e) for e in graph.edges],
        "nodes": [[n.id, n.label] for n in graph],
    })


def _decode_graph(data: bytes) -> ToyGraph:
    raw = _load(data)
    graph = ToyGraph()
    for node_id, label in raw["nodes"]:
        graph.add_node(node_id, label)
    for source, target in raw["edges"]:
        graph.add_edge(source, target)
    return graph


def _probe_graph() -> ToyGraph:
    graph = ToyGraph()
    graph.add_node(1, "a")
    graph.add_node(2, "b")
    graph.add_edge(1, 2)
    return graph


def builtin_converters() -> list[Converter]:
    clid = class_registry.clid_of
    return [
        Converter(clid(Track), Track, lambda t: _dump(t.to_list()), _decode_track,
                  probe=lambda: Track(1, 0.5, -0.25, 2.0, 0.75)),
        Converter(clid(TrackCollection), TrackCollection,
                  lambda c: _dump([t.to_list() for t in c]), _decode_tracks,
                  probe=lambda: TrackCollection([Track(1, 0.5, -0.25, 2.0, 0.75)])),
        Converter(clid(Cluster), Cluster, lambda c: _dump(c.to_list()),
                  lambda d: Cluster(*_load(d)),
                  probe=lambda: Cluster(1, 10.5, 0.1, -1.2)),
        Converter(clid(ClusterCollection), ClusterCollection,
                  lambda c: _dump([x.to_list() for x in c]), _decode_clusters,
                  probe=lambda: ClusterCollection([Cluster(1, 10.5, 0.1, -1.2)])),
        Converter(clid(NumberSequence), NumberSequence,
                  lambda s: _dump(list(s)), lambda d: NumberSequence(_load(d)),
                  probe=lambda: NumberSequence([10, 20.5, -3])),
        Converter(clid(StringMap), StringMap,
                  lambda m: _dump(dict(m)), lambda d: StringMap(_load(d)),
                  probe=lambda: StringMap({"pt": 1.5, "eta": -0.5})),
        Converter(clid(ToyGraph), ToyGraph, _encode_graph, _decode_graph, probe=_probe_graph),
    ]


def register_builtin_converters(registry: ConverterRegistry = converters) -> None:
    for converter in builtin_converters():
        registry.register(converter)


register_builtin_converters()
