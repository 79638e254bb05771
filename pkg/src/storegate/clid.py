"""Class identifiers for storable types.

A ClassId is a process-stable number naming a storable type. Ids are derived
from the type name (FNV-1a, folded into the valid range) and kept in a plain
text database, one ``<id> <name>`` pair per line, so that independent builds
agree and collisions can be caught by :func:`verify`.
"""

import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, TypeVar, Union

from .errors import DuplicateId, DuplicateName, EmptyName, IoError, ParseError, UnregisteredType

logger = logging.getLogger(__name__)

MIN_CLASS_ID = 256
MAX_CLASS_ID = 2**31  # exclusive

FNV_OFFSET_BASIS = 0x811C9DC5
FNV_PRIME = 0x01000193

ClassId = int


def fnv1a_32(data: bytes) -> int:
    """32-bit FNV-1a hash."""
    h = FNV_OFFSET_BASIS
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFF
    return h


def assign_id(type_name: str) -> ClassId:
    """Deterministic class id for a type name.

    The FNV-1a hash of the UTF-8 name with the top bit cleared; values below
    256 are reserved, so those are shifted up by 256.
    """
    if not type_name:
        raise EmptyName("type name must not be empty")
    if _has_whitespace(type_name):
        raise ValueError(f"type name must be a single token: {type_name!r}")
    value = fnv1a_32(type_name.encode("utf-8")) & 0x7FFFFFFF
    if value < MIN_CLASS_ID:
        value += MIN_CLASS_ID
    return value


def _has_whitespace(text: str) -> bool:
    return any(ch.isspace() for ch in text)


@dataclass(frozen=True)
class TypeEntry:
    """One line of the class id database."""
    id: ClassId
    type_name: str

    def __post_init__(self):
        if not self.type_name:
            raise EmptyName("type name must not be empty")
        if _has_whitespace(self.type_name):
            raise ValueError(f"type name must be a single token: {self.type_name!r}")
        if not (MIN_CLASS_ID <= self.id < MAX_CLASS_ID):
            raise ValueError(f"class id {self.id} outside [{MIN_CLASS_ID}, {MAX_CLASS_ID})")

    def to_dict(self) -> dict:
        return {"id": self.id, "type_name": self.type_name}


@dataclass(frozen=True)
class ClidDatabase:
    """Immutable list of type entries; registration returns a new database."""
    entries: tuple[TypeEntry, ...] = ()
    source_path: Optional[Path] = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def name_of(self, class_id: ClassId) -> Optional[str]:
        for entry in self.entries:
            if entry.id == class_id:
                return entry.type_name
        return None

    def id_of(self, type_name: str) -> Optional[ClassId]:
        for entry in self.entries:
            if entry.type_name == type_name:
                return entry.id
        return None

    def entry_set(self) -> set[TypeEntry]:
        return set(self.entries)


@dataclass(frozen=True)
class Conflict:
    """Two database entries that disagree."""
    kind: str  # "duplicate_id" or "duplicate_name"
    first: TypeEntry
    second: TypeEntry

    def describe(self) -> str:
        if self.kind == "duplicate_id":
            return (f"class id {self.first.id} bound to both "
                    f"'{self.first.type_name}' and '{self.second.type_name}'")
        return (f"type '{self.first.type_name}' bound to both "
                f"{self.first.id} and {self.second.id}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
        }


@dataclass
class ConflictReport:
    duplicate_ids: list[Conflict] = field(default_factory=list)
    duplicate_names: list[Conflict] = field(default_factory=list)

    @property
    def conflicts(self) -> list[Conflict]:
        return self.duplicate_ids + self.duplicate_names

    def is_clean(self) -> bool:
        return not self.duplicate_ids and not self.duplicate_names

    def __len__(self) -> int:
        return len(self.duplicate_ids) + len(self.duplicate_names)

    def to_dict(self) -> dict:
        return {
            "duplicate_ids": [c.to_dict() for c in self.duplicate_ids],
            "duplicate_names": [c.to_dict() for c in self.duplicate_names],
        }


def load_db(path: Union[str, Path]) -> ClidDatabase:
    """Parse a class id database file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(path, e) from e

    entries = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or not (parts[0].isascii() and parts[0].isdigit()):
            raise ParseError(lineno, f"expected '<decimal-id> <type-name>', got {raw!r}")
        try:
            entries.append(TypeEntry(int(parts[0]), parts[1]))
        except ValueError as e:
            raise ParseError(lineno, str(e)) from e

    logger.debug("loaded %d class id entries from %s", len(entries), path)
    return ClidDatabase(tuple(entries), source_path=path)


def save_db(db: ClidDatabase, path: Union[str, Path]) -> None:
    """Write entries sorted by id, one ``<id> <name>`` per line."""
    path = Path(path)
    lines = [f"{e.id} {e.type_name}\n" for e in sorted(db.entries, key=lambda e: (e.id, e.type_name))]
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("".join(lines))
    except OSError as e:
        raise IoError(path, e) from e


def verify(db: ClidDatabase) -> ConflictReport:
    """Report every pair of entries that share an id or a name but not both."""
    report = ConflictReport()
    by_id: dict[int, list[TypeEntry]] = {}
    by_name: dict[str, list[TypeEntry]] = {}
    for entry in db.entries:
        by_id.setdefault(entry.id, []).append(entry)
        by_name.setdefault(entry.type_name, []).append(entry)

    for group in by_id.values():
        for i, first in enumerate(group):
            for second in group[i + 1:]:
                if first.type_name != second.type_name:
                    report.duplicate_ids.append(Conflict("duplicate_id", first, second))

    for group in by_name.values():
        for i, first in enumerate(group):
            for second in group[i + 1:]:
                if first.id != second.id:
                    report.duplicate_names.append(Conflict("duplicate_name", first, second))

    return report


def register_runtime(db: ClidDatabase, entry: TypeEntry) -> ClidDatabase:
    """Return ``db`` with ``entry`` appended; exact duplicates are a no-op."""
    for existing in db.entries:
        if existing == entry:
            return db
        if existing.id == entry.id:
            raise DuplicateId(existing.type_name, entry.id)
        if existing.type_name == entry.type_name:
            raise DuplicateName(existing.id, entry.type_name)
    return ClidDatabase(db.entries + (entry,), source_path=db.source_path)


@dataclass(frozen=True)
class StorableType:
    """Runtime record of a Python class that may be put in a store."""
    entry: TypeEntry
    cls: type
    kind: Optional[str] = None  # container kind used to pick an indexing policy

    @property
    def class_id(self) -> ClassId:
        return self.entry.id

    @property
    def type_name(self) -> str:
        return self.entry.type_name


class ClassRegistry:
    """Process-wide mapping between Python classes and class ids.

    Registration is serialized by a lock; lookups read plain dicts.
    """

    def __init__(self, database: Optional[ClidDatabase] = None):
        self._lock = threading.Lock()
        self._database = database if database is not None else ClidDatabase()
        self._by_type: dict[type, StorableType] = {}
        self._by_id: dict[int, StorableType] = {}

    @property
    def database(self) -> ClidDatabase:
        return self._database

    def register(
        self,
        cls: type,
        name: Optional[str] = None,
        class_id: Optional[ClassId] = None,
        kind: Optional[str] = None,
    ) -> StorableType:
        name = name or cls.__name__
        entry = TypeEntry(class_id if class_id is not None else assign_id(name), name)

        with self._lock:
            known = self._by_type.get(cls)
            if known is not None:
                if known.entry == entry:
                    return known
                raise DuplicateName(known.class_id, known.type_name)
            owner = self._by_id.get(entry.id)
            if owner is not None and owner.cls is not cls:
                raise DuplicateId(owner.type_name, entry.id)
            self._database = register_runtime(self._database, entry)
            info = StorableType(entry, cls, kind)
            self._by_type[cls] = info
            self._by_id[entry.id] = info

        logger.debug("registered %s as class id %d", name, entry.id)
        return info

    def unregister(self, cls: type) -> None:
        with self._lock:
            info = self._by_type.pop(cls, None)
            if info is None:
                return
            self._by_id.pop(info.class_id, None)
            self._database = ClidDatabase(
                tuple(e for e in self._database.entries if e != info.entry),
                source_path=self._database.source_path,
            )

    def info(self, cls: type) -> StorableType:
        info = self._by_type.get(cls)
        if info is None:
            raise UnregisteredType(f"type {cls.__qualname__} has no class id; decorate it with @storable")
        return info

    def clid_of(self, cls: type) -> ClassId:
        return self.info(cls).entry.id

    def by_id(self, class_id: ClassId) -> Optional[StorableType]:
        return self._by_id.get(class_id)

    def is_registered(self, cls: type) -> bool:
        return cls in self._by_type

    def check_against(self, db: ClidDatabase) -> ConflictReport:
        """Conflicts between the runtime registrations and an external database."""
        merged = ClidDatabase(db.entries + self._database.entries)
        report = verify(merged)
        return report


class_registry = ClassRegistry()

T = TypeVar("T", bound=type)


def storable(
    cls: Optional[T] = None,
    *,
    name: Optional[str] = None,
    class_id: Optional[ClassId] = None,
    kind: Optional[str] = None,
) -> Union[T, Callable[[T], T]]:
    """Class decorator registering a storable type with ``class_registry``.

    Usable bare (``@storable``) or with arguments
    (``@storable(name="TrackCollection", kind="sequence")``).
    """

    def wrap(klass: T) -> T:
        class_registry.register(klass, name=name, class_id=class_id, kind=kind)
        return klass

    if cls is not None:
        return wrap(cls)
    return wrap
