"""Tests for class ids and the class id database."""

import random
import string

import pytest

from storegate.clid import (
    MIN_CLASS_ID,
    ClassRegistry,
    ClidDatabase,
    TypeEntry,
    assign_id,
    load_db,
    register_runtime,
    save_db,
    verify,
)
from storegate.errors import DuplicateId, DuplicateName, EmptyName, IoError, ParseError, UnregisteredType
from storegate.store import EventStore


def fnv1a_oracle(name: str) -> int:
    h = 2166136261
    for byte in name.encode("utf-8"):
        h ^= byte
        h = (h * 16777619) % (1 << 32)
    h &= 0x7FFFFFFF
    return h + 256 if h < 256 else h


def test_assign_id_matches_fnv1a_oracle():
    """Test assign_id against an independent FNV-1a implementation on random names."""
    rng = random.Random(1234)
    alphabet = string.ascii_letters + string.digits + "_:<>é"
    for _ in range(10_000):
        name = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 24)))
        assert assign_id(name) == fnv1a_oracle(name)


def test_assign_id_range_and_stability():
    """Test that ids are stable and within the valid range."""
    assert assign_id("TrackCollection") == assign_id("TrackCollection")
    assert MIN_CLASS_ID <= assign_id("TrackCollection") < 2**31
    assert assign_id("TrackCollection") != assign_id("ClusterCollection")


def test_assign_id_rejects_empty_name():
    """Test that an empty name raises EmptyName."""
    with pytest.raises(EmptyName):
        assign_id("")


def test_load_and_save_roundtrip(tmp_path):
    """Test that save_db writes sorted lines that load back to the same entries."""
    db = ClidDatabase((TypeEntry(900, "B"), TypeEntry(300, "A")))
    path = tmp_path / "classes.db"
    save_db(db, path)

    assert path.read_text() == "300 A\n900 B\n"
    assert load_db(path).entry_set() == db.entry_set()


def test_load_skips_comments_and_blank_lines(tmp_path):
    """Test that comment and blank lines are ignored."""
    path = tmp_path / "classes.db"
    path.write_text("# generated\n\n300 A\n")
    assert [e.type_name for e in load_db(path)] == ["A"]


def test_load_reports_malformed_line(tmp_path):
    """Test that a malformed line is reported with its number."""
    path = tmp_path / "classes.db"
    path.write_text("300 A\nnot-a-line\n")
    with pytest.raises(ParseError) as exc:
        load_db(path)
    assert exc.value.line == 2


def test_load_missing_file_is_io_error(tmp_path):
    """Test that a missing database raises IoError naming the path."""
    with pytest.raises(IoError, match="missing.db"):
        load_db(tmp_path / "missing.db")


def test_register_runtime_is_idempotent_and_detects_conflicts():
    """Test exact duplicates are a no-op and conflicting entries raise."""
    db = ClidDatabase((TypeEntry(300, "A"),))
    assert register_runtime(db, TypeEntry(300, "A")) is db

    with pytest.raises(DuplicateId) as exc:
        register_runtime(db, TypeEntry(300, "B"))
    assert exc.value.existing_name == "A"

    with pytest.raises(DuplicateName) as exc:
        register_runtime(db, TypeEntry(301, "A"))
    assert exc.value.existing_id == 300

    grown = register_runtime(db, TypeEntry(301, "B"))
    assert len(grown) == 2 and len(db) == 1


@pytest.mark.parametrize("seed", range(20))
def test_verify_detects_every_injected_conflict(seed):
    """Test that verify reports exactly the injected duplicate ids and names."""
    rng = random.Random(seed)
    size = rng.randint(2, 1000)
    names = [f"Type{i}" for i in range(size)]
    entries = [TypeEntry(assign_id(n), n) for n in names]
    assert verify(ClidDatabase(tuple(entries))).is_clean()

    victim = rng.choice(entries)
    other = rng.choice([e for e in entries if e is not victim])
    injected = [
        TypeEntry(victim.id, "Injected" + victim.type_name),  # duplicate id
        TypeEntry(other.id + 1 if other.id + 1 < 2**31 else other.id - 1, other.type_name),  # duplicate name
    ]
    db = ClidDatabase(tuple(entries + injected))
    report = verify(db)

    assert not report.is_clean()
    assert any(c.first.id == victim.id for c in report.duplicate_ids)
    assert any(c.first.type_name == other.type_name for c in report.duplicate_names)


def test_registry_register_and_lookup():
    """Test registering a class and looking it up both ways."""
    registry = ClassRegistry()

    class Foo:
        pass

    info = registry.register(Foo, kind="sequence")
    assert info.type_name == "Foo"
    assert registry.clid_of(Foo) == assign_id("Foo")
    assert registry.by_id(info.class_id).cls is Foo
    assert registry.register(Foo, kind="sequence") is info

    class Other:
        pass

    with pytest.raises(DuplicateId):
        registry.register(Other, name="Other", class_id=info.class_id)

    registry.unregister(Foo)
    with pytest.raises(UnregisteredType):
        registry.info(Foo)


def test_registry_check_against_external_db():
    """Test that a database disagreeing with the registry is reported."""
    registry = ClassRegistry()

    class Bar:
        pass

    registry.register(Bar)
    assert registry.check_against(ClidDatabase((TypeEntry(assign_id("Bar"), "Bar"),))).is_clean()
    report = registry.check_against(ClidDatabase((TypeEntry(assign_id("Bar") + 1, "Bar"),)))
    assert len(report.duplicate_names) == 1


def test_registry_refuses_second_class_with_same_name():
    """Test that two Python classes cannot share one type name and class id."""
    registry = ClassRegistry()

    class Foo(list):
        pass

    first = Foo
    registry.register(first)

    class Foo(dict):  # noqa: F811
        pass

    with pytest.raises(DuplicateId):
        registry.register(Foo)
    assert registry.by_id(assign_id("Foo")).cls is first
    assert not registry.is_registered(Foo)

    store = EventStore(registry=registry)
    with pytest.raises(UnregisteredType):
        store.record(Foo(), "k")
    store.record(first([1]), "k")
    assert store.retrieve(first, "k") == [1]
