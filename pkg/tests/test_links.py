"""Tests for links and indexing policies."""

import io
import random
import string

import pytest

from storegate.edm import NumberSequence, StringMap, ToyGraph, Track, TrackCollection
from storegate.errors import ElementNotInContainer, IndexOutOfRange, NoPolicyForKind, NotFound, ParseError
from storegate.links import (
    ElementLink,
    ElementLinkVector,
    KeyedIndexing,
    NodeIdIndexing,
    PositionalIndexing,
    default_indexing_for,
    kind_of,
    link_from_persistent,
    link_to_persistent,
    make_element_link,
    make_object_link,
    object_link_from_persistent,
    register_indexing,
    unregister_indexing,
)
from storegate.persistence import read_store_lazy, write_store
from storegate.store import EventStore


def random_sequence(rng):
    return NumberSequence(rng.choice([rng.randint(-50, 50), round(rng.uniform(-1, 1), 6)])
                          for _ in range(rng.randint(1, 1000)))


def random_map(rng):
    keys = {"".join(rng.choice(string.ascii_letters + "é/ ") for _ in range(rng.randint(1, 12)))
            for _ in range(rng.randint(1, 1000))}
    return StringMap({k: rng.randint(0, 10**6) for k in keys})


def random_graph(rng):
    graph = ToyGraph()
    ids = rng.sample(range(10_000), rng.randint(1, 100))
    for node_id in ids:
        graph.add_node(node_id, f"n{node_id}")
    for _ in range(len(ids)):
        graph.add_edge(rng.choice(ids), rng.choice(ids))
    return graph


def elements_of(container):
    if isinstance(container, StringMap):
        return list(container.items())
    return list(container)


def restored_store(store):
    """A new store reading back everything in ``store`` lazily."""
    buffer = io.BytesIO()
    write_store(store, buffer)
    restored = EventStore()
    read_store_lazy(buffer.getvalue(), restored)
    return restored


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("factory", [random_sequence, random_map, random_graph])
def test_links_survive_persist_restore_resolve(factory, seed):
    """Test that every element's link resolves to an equal element after a round trip."""
    rng = random.Random(seed)
    container = factory(rng)
    store = EventStore()
    store.record(container, "c")
    elements = elements_of(container)

    records = [
        link_to_persistent(make_element_link(store, type(container), "c", element))
        for element in elements
    ]
    restored = restored_store(store)

    for element, record in zip(elements, records):
        link = link_from_persistent(record, restored)
        assert link.resolve() == element


def test_index_is_bijective_for_sequences():
    """Test that distinct positions give distinct indexes."""
    seq = NumberSequence([10, 20, 30])
    policy = PositionalIndexing()
    indexes = [policy.index_of(seq, v) for v in seq]
    assert indexes == [b"0", b"1", b"2"]
    assert [policy.element_at(seq, i) for i in indexes] == [10, 20, 30]


def test_policy_errors():
    """Test foreign elements and bad indexes."""
    with pytest.raises(ElementNotInContainer):
        PositionalIndexing().index_of([1, 2], 3)
    with pytest.raises(IndexOutOfRange):
        PositionalIndexing().element_at([1, 2], b"2")
    with pytest.raises(ElementNotInContainer):
        KeyedIndexing().index_of({"a": 1}, ("a", 2))
    with pytest.raises(IndexOutOfRange):
        KeyedIndexing().element_at({"a": 1}, b"b")
    graph = ToyGraph()
    graph.add_node(1)
    with pytest.raises(IndexOutOfRange):
        NodeIdIndexing().element_at(graph, b"2")


def test_default_policies_by_kind():
    """Test the kind registry and its error for unknown kinds."""
    assert isinstance(default_indexing_for(kind_of(TrackCollection())), PositionalIndexing)
    assert isinstance(default_indexing_for(kind_of(StringMap())), KeyedIndexing)
    assert isinstance(default_indexing_for(kind_of(ToyGraph())), NodeIdIndexing)
    with pytest.raises(NoPolicyForKind, match="register_indexing"):
        default_indexing_for("tree")


def test_link_resolution_is_cached_per_event(store):
    """Test that a link re-resolves after the store starts a new event."""
    tracks = TrackCollection([Track(0, 1.0, 1.0, 1.0, 0.9)])
    store.record(tracks, "TM", lifetime="job")
    link = make_element_link(store, TrackCollection, "TM", tracks[0])

    assert link.resolve() == tracks[0]
    assert link.resolve() is link.resolve()
    store.clear()
    assert link.resolve() == tracks[0]


def test_linking_to_virtual_container_faults_it_in(store, counting_loader):
    """Test that resolving a link to an unloaded container loads it once."""
    tracks = TrackCollection([Track(0, 1.0, 1.0, 1.0, 0.9), Track(1, 2.0, 2.0, 2.0, 0.1)])
    loader = counting_loader(tracks)
    key = store.register_loader(TrackCollection, "lazy", loader)
    link = ElementLink(key, b"1", store=store)

    assert loader.calls == 0
    assert link.resolve().id == 1
    assert link.resolve().id == 1
    assert loader.calls == 1


def test_object_links(store):
    """Test object links, their records and missing targets."""
    seq = NumberSequence([1, 2])
    store.record(seq, "numbers")
    link = make_object_link(store, NumberSequence, "numbers")
    record = link.to_persistent()

    assert record.startswith("OLINK ")
    assert object_link_from_persistent(record, store).resolve() == seq
    with pytest.raises(NotFound):
        make_object_link(store, NumberSequence, "absent")


def test_malformed_link_records():
    """Test that bad records raise ParseError."""
    for record in ("LINK 1 2", "LINK x YQ== MA==", "LINK 300 !!! MA==", "OLINK 300"):
        with pytest.raises(ParseError):
            if record.startswith("OLINK"):
                object_link_from_persistent(record)
            else:
                link_from_persistent(record)


def test_link_vector_round_trip(store):
    """Test that a stored link vector is written as LINK lines and read back bound."""
    tracks = TrackCollection([Track(i, 0.0, 0.0, 0.0, i / 10) for i in range(4)])
    store.record(tracks, "TM")
    links = ElementLinkVector(make_element_link(store, TrackCollection, "TM", t) for t in tracks[2:])
    store.record(links, "LB")

    buffer = io.BytesIO()
    write_store(store, buffer)
    text = buffer.getvalue().decode()
    assert text.count("\nLINK ") == 2

    restored = EventStore()
    read_store_lazy(text, restored)
    back = restored.retrieve(ElementLinkVector, "LB")
    assert [link.resolve().id for link in back] == [2, 3]


def test_register_indexing_checks_the_kind():
    """Test that a policy is only registered for kinds it can index."""
    with pytest.raises(NoPolicyForKind, match="tree"):
        register_indexing("tree", PositionalIndexing())
    with pytest.raises(NoPolicyForKind):
        default_indexing_for("tree")

    class AnyIndexing(PositionalIndexing):
        kinds = ()

    register_indexing("tree", AnyIndexing())
    try:
        assert isinstance(default_indexing_for("tree"), AnyIndexing)
    finally:
        unregister_indexing("tree")


def test_resolve_uses_the_store_given(store):
    """Test that an explicitly passed store is used even when it is empty."""
    tracks = TrackCollection([Track(0, 1.0, 1.0, 1.0, 0.9)])
    store.record(tracks, "TM")
    link = make_element_link(store, TrackCollection, "TM", tracks[0])
    assert link.resolve() == tracks[0]
    with pytest.raises(NotFound):
        link.resolve(EventStore())
