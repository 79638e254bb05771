"""Tests for store files."""

import base64
import io
import random

import pytest

from storegate.clid import ClidDatabase, storable
from storegate.converters import Converter, ConverterRegistry, converters
from storegate.edm import (
    Cluster,
    ClusterCollection,
    NumberSequence,
    StringMap,
    ToyGraph,
    Track,
    TrackCollection,
    builtin_converters,
)
from storegate.errors import (
    ConverterConflict,
    DecodeFailed,
    DuplicateKey,
    LoadFailed,
    MissingConverter,
    NotFound,
    ParseError,
    UnknownClassId,
)
from storegate.links import ElementLinkVector, make_element_link
from storegate.persistence import HEADER, ImageWriter, parse_image, read_store_eager, read_store_lazy, write_store
from storegate.store import EventStore


@storable(name="UnconvertedThing")
class UnconvertedThing(list):
    pass


def random_store(rng: random.Random) -> EventStore:
    store = EventStore()
    for i in range(rng.randint(1, 4)):
        tracks = TrackCollection(
            Track(j, rng.uniform(-5, 5), rng.uniform(-5, 5), rng.gauss(0, 10), rng.random())
            for j in range(rng.randint(0, 20))
        )
        store.record(tracks, f"tracks{i}")
        if tracks and rng.random() < 0.7:
            chosen = rng.sample(list(tracks), rng.randint(1, len(tracks)))
            store.record(
                ElementLinkVector(make_element_link(store, TrackCollection, f"tracks{i}", t) for t in chosen),
                f"links{i}",
            )
    if rng.random() < 0.5:
        store.record(ClusterCollection(Cluster(j, rng.expovariate(1), rng.uniform(-3, 3), rng.uniform(-3, 3))
                                       for j in range(rng.randint(0, 5))))
    if rng.random() < 0.5:
        store.record(NumberSequence(rng.choice([rng.randint(-9, 9), rng.random()]) for _ in range(5)), 7)
    if rng.random() < 0.5:
        store.record(StringMap({f"k{j}": rng.random() for j in range(rng.randint(0, 4))}), "map")
    if rng.random() < 0.5:
        graph = ToyGraph()
        for j in range(rng.randint(1, 6)):
            graph.add_node(j, f"n{j}")
        graph.add_edge(0, 0)
        store.record(graph, "graph")
    return store


def write(store: EventStore) -> bytes:
    buffer = io.BytesIO()
    write_store(store, buffer, event_number=0)
    return buffer.getvalue()


def materialize_all(store: EventStore) -> None:
    for store_key in store.store_keys():
        store.bucket(store_key)


@pytest.mark.parametrize("seed", range(100))
def test_write_read_write_is_byte_identical(seed):
    """Test the full round trip through both read modes."""
    first = write(random_store(random.Random(seed)))

    eager = EventStore()
    read_store_eager(first, eager)
    assert write(eager) == first

    lazy = EventStore()
    read_store_lazy(first, lazy)
    materialize_all(lazy)
    assert write(lazy) == first


def test_file_layout(store):
    """Test the header, event line and record sort order."""
    store.record(TrackCollection([Track(0, 1.5, 0.0, 0.0, 0.25)]), "b")
    store.record(TrackCollection(), "a")
    lines = write(store).decode().splitlines()

    assert lines[0] == HEADER
    assert lines[1] == "EVENT 0"
    keys = [base64.b64decode(line.split(" ")[2]).decode() for line in lines[2:]]
    assert keys == ["a", "b"]
    payload = base64.b64decode(lines[3].split(" ")[4])
    assert payload == b"[[0,1.5,0.0,0.0,0.25]]"


def test_lazy_read_decodes_nothing_until_used():
    """Test that a lazy read decodes each record at most once, on first access."""
    store = EventStore()
    store.record(TrackCollection([Track(0, 1.0, 1.0, 1.0, 0.5)]), "tracks")
    store.record(ClusterCollection([Cluster(0, 1.0, 0.0, 0.0)]), "clusters")
    data = write(store)
    converters.reset_counts()

    lazy = EventStore()
    assert read_store_lazy(data, lazy) == 2
    assert converters.total_decodes == 0

    for _ in range(3):
        lazy.retrieve(TrackCollection)
    assert converters.total_decodes == 1
    assert converters.decode_counts[lazy.registry.clid_of(ClusterCollection)] == 0
    assert lazy.fault_count == 1


def test_eager_read_decodes_everything_and_publishes():
    """Test that an eager read installs locked, valid proxies."""
    store = EventStore()
    store.record(NumberSequence([1, 2]), "n")
    eager = EventStore()
    read_store_eager(write(store), eager)

    assert converters.total_decodes == 1
    assert all(p.is_valid and p.locked for p in eager.proxies())


def test_event_selection():
    """Test reading a chosen event from a multi-event file."""
    buffer = io.BytesIO()
    writer = ImageWriter(buffer)
    writer.write_header()
    store = EventStore()
    for number in range(3):
        store.record(NumberSequence([number]), "n")
        writer.write_event(store, number)
        store.clear()
    data = buffer.getvalue()

    assert len(parse_image(data).events) == 3
    target = EventStore()
    read_store_eager(data, target, event=2)
    assert target.retrieve(NumberSequence, "n") == [2]

    first = EventStore()
    read_store_eager(data, first)
    assert first.retrieve(NumberSequence, "n") == [0]

    with pytest.raises(NotFound):
        read_store_lazy(data, EventStore(), event=7)


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("NOT A HEADER\n", 1),
    (f"{HEADER}\nREC 1 YQ== X MA==\n", 2),
    (f"{HEADER}\nEVENT 0\nREC 1 YQ== X\n", 3),
    (f"{HEADER}\nEVENT 0\nREC 1 !!!! X MA==\n", 3),
    (f"{HEADER}\nEVENT 0\nLINK 1 YQ== MA==\n", 3),
    (f"{HEADER}\nEVENT zero\n", 2),
])
def test_parse_errors_name_the_line(text, line):
    """Test malformed files raise ParseError with the offending line."""
    with pytest.raises(ParseError) as exc:
        parse_image(text)
    assert exc.value.line == line


def test_truncated_link_records(store):
    """Test that a link record missing its LINK lines is rejected."""
    tracks = TrackCollection([Track(0, 0.0, 0.0, 0.0, 0.0), Track(1, 0.0, 0.0, 0.0, 0.0)])
    store.record(tracks, "t")
    store.record(ElementLinkVector(make_element_link(store, TrackCollection, "t", x) for x in tracks), "l")
    text = write(store).decode()
    lines = text.splitlines()
    last_link = max(i for i, line in enumerate(lines) if line.startswith("LINK "))
    truncated = "\n".join(lines[:last_link] + lines[last_link + 1:]) + "\n"

    with pytest.raises(ParseError):
        parse_image(truncated)


def test_unknown_class_id(store):
    """Test that a record whose class id is not in the database is rejected."""
    store.record(NumberSequence([1]), "n")
    with pytest.raises(UnknownClassId):
        read_store_eager(write(store), EventStore(), clid_db=ClidDatabase())


def test_missing_converter(store):
    """Test that writing a type without a converter fails."""
    store.record(UnconvertedThing([1]), "u")
    with pytest.raises(MissingConverter):
        write(store)


def test_decode_failure_is_reported(store):
    """Test that a corrupt payload fails on dereference with the record named."""
    store.record(NumberSequence([1]), "n")
    text = write(store).decode()
    corrupt = text.replace(base64.b64encode(b"[1]").decode(), base64.b64encode(b"[1").decode())
    lazy = EventStore()
    read_store_lazy(corrupt, lazy)
    with pytest.raises(LoadFailed) as exc:
        lazy.retrieve(NumberSequence, "n")
    assert isinstance(exc.value.__cause__, DecodeFailed)


def test_converter_conflicts():
    """Test that a second, different converter for the same id is refused."""
    registry = ConverterRegistry()
    original = builtin_converters()[-1]
    registry.register(original)
    registry.register(original)

    bogus = Converter(original.class_id, original.type, lambda g: b"{}", original.decode, probe=original.probe)
    with pytest.raises(ConverterConflict):
        registry.register(bogus)
    with pytest.raises(MissingConverter):
        registry.get(12345)


def test_failed_eager_read_installs_nothing(store):
    """Test that a corrupt record leaves the target store untouched in eager mode."""
    store.record(NumberSequence([1]), "a")
    store.record(NumberSequence([2]), "b")
    text = write(store).decode()
    corrupt = text.replace(base64.b64encode(b"[2]").decode(), base64.b64encode(b"[2").decode())

    target = EventStore()
    with pytest.raises(DecodeFailed):
        read_store_eager(corrupt, target)
    assert len(target) == 0
    assert target.audit() == []


@pytest.mark.parametrize("read", [read_store_lazy, read_store_eager])
def test_colliding_read_installs_nothing(store, read):
    """Test that a key collision is found before any record is installed."""
    store.record(NumberSequence([1]), "a")
    store.record(NumberSequence([2]), "b")
    data = write(store)

    target = EventStore()
    target.record(NumberSequence([9]), "b")
    with pytest.raises(DuplicateKey):
        read(data, target)
    assert target.keys_of(NumberSequence) == ["b"]
    assert target.retrieve(NumberSequence, "b") == [9]
