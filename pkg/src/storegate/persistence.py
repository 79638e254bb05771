"""Store files: writing events out and reading them back.

Line-oriented UTF-8 format, ``\\n`` line endings, no trailing whitespace::

    SGSTORE v1
    EVENT <event number>
    REC <class_id> <base64(key)> <type name> <base64(payload)>
    LINK <class_id> <base64(container key)> <base64(index)>

Records within an event are sorted by (class id, key encoding). A record whose
converter carries links stores the link count as its payload and is followed
by that many LINK lines.

Reading installs either virtual proxies (``read_store_lazy``: payloads are
decoded on first dereference) or published objects (``read_store_eager``).
"""

import base64
import binascii
import io
import logging
from dataclasses import dataclass, field
from functools import partial
from typing import IO, Any, Optional, Union

from .clid import ClidDatabase
from .converters import Converter, ConverterRegistry, converters as default_converters
from .errors import DecodeFailed, DuplicateKey, NotFound, ParseError, UnknownClassId
from .store import EventStore, StoreKey

logger = logging.getLogger(__name__)

HEADER = "SGSTORE v1"
EVENT_TAG = "EVENT"
RECORD_TAG = "REC"
LINK_TAG = "LINK"


@dataclass
class ObjectRecord:
    class_id: int
    key: str
    type_name: str
    payload: bytes
    line: int
    links: list[str] = field(default_factory=list)

    @property
    def store_key(self) -> StoreKey:
        return StoreKey(self.class_id, self.key)

    def canonical_payload(self) -> bytes:
        """Payload as the converter sees it (link records folded back in)."""
        if not self.links:
            return self.payload
        return b"\n".join([self.payload] + [link.encode("utf-8") for link in self.links])

    def describe(self) -> str:
        return f"{self.type_name} {self.key!r} (line {self.line})"


@dataclass
class EventImage:
    number: int
    line: int
    records: list[ObjectRecord] = field(default_factory=list)


@dataclass
class StoreImage:
    events: list[EventImage] = field(default_factory=list)

    def event(self, number: int) -> EventImage:
        for event in self.events:
            if event.number == number:
                return event
        raise NotFound(f"no event {number} in store file")

    @property
    def record_count(self) -> int:
        return sum(len(e.records) for e in self.events)


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _unb64(token: str, line: int) -> bytes:
    try:
        return base64.b64decode(token.encode("ascii"), validate=True)
    except (binascii.Error, UnicodeEncodeError) as e:
        raise ParseError(line, f"bad base64 token {token!r}") from e


def _decimal(token: str, line: int, what: str) -> int:
    if not (token.isascii() and token.isdigit()):
        raise ParseError(line, f"bad {what} {token!r}")
    return int(token)


def _read_text(source: Union[IO, bytes, str]) -> str:
    data = source if isinstance(source, (bytes, str)) else source.read()
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(1, f"store file is not UTF-8: {e}") from e
    return data


def parse_image(
    source: Union[IO, bytes, str],
    converters: Optional[ConverterRegistry] = None,
) -> StoreImage:
    """Parse a whole store file."""
    registry = converters if converters is not None else default_converters
    text = _read_text(source)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != HEADER:
        raise ParseError(1, f"missing '{HEADER}' header")

    image = StoreImage()
    current: Optional[EventImage] = None
    pending: Optional[ObjectRecord] = None  # record still owed LINK lines
    owed = 0

    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        tag = parts[0]

        if owed:
            if tag != LINK_TAG or len(parts) != 4:
                raise ParseError(lineno, f"expected {owed} more LINK line(s) for {pending.describe()}")
            pending.links.append(line)
            owed -= 1
            continue

        if tag == EVENT_TAG:
            if len(parts) != 2:
                raise ParseError(lineno, f"expected 'EVENT <n>', got {line!r}")
            current = EventImage(_decimal(parts[1], lineno, "event number"), lineno)
            image.events.append(current)
        elif tag == RECORD_TAG:
            if current is None:
                raise ParseError(lineno, "record before any EVENT line")
            if len(parts) != 5 or not all(parts):
                raise ParseError(lineno, f"expected 'REC <class_id> <key> <type> <payload>', got {line!r}")
            key = _unb64(parts[2], lineno)
            try:
                key_text = key.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(lineno, "record key is not UTF-8") from e
            record = ObjectRecord(
                class_id=_decimal(parts[1], lineno, "class id"),
                key=key_text,
                type_name=parts[3],
                payload=_unb64(parts[4], lineno),
                line=lineno,
            )
            current.records.append(record)
            converter = registry.find(record.class_id)
            if converter is not None and converter.carries_links:
                owed = _decimal(record.payload.decode("ascii", "replace"), lineno, "link count")
                pending = record
        elif tag == LINK_TAG:
            raise ParseError(lineno, "LINK line without an owning link record")
        else:
            raise ParseError(lineno, f"unknown line {line!r}")

    if owed:
        raise ParseError(len(lines) + 1, f"file ends {owed} LINK line(s) short for {pending.describe()}")
    return image


class ImageWriter:
    """Writes a store file one event at a time."""

    def __init__(self, sink: IO, converters: Optional[ConverterRegistry] = None):
        self.sink = sink
        self.converters = converters
        self._text = isinstance(sink, io.TextIOBase)

    def _write(self, text: str) -> None:
        self.sink.write(text if self._text else text.encode("utf-8"))

    def write_header(self) -> None:
        self._write(HEADER + "\n")

    def write_event(self, store: EventStore, event_number: int) -> int:
        """Write the event section for ``store``; returns the number of records."""
        registry = self.converters if self.converters is not None else store.converters
        lines = [f"{EVENT_TAG} {event_number}"]
        count = 0
        for store_key in store.store_keys():
            proxy = store.proxy(store_key)
            if not proxy.is_valid:
                # never loaded: it still lives on the persistent side
                continue
            converter = registry.get(store_key.class_id)
            lines.extend(_record_lines(store, converter, store_key, proxy.bucket.payload))
            count += 1
        self._write("\n".join(lines) + "\n")
        logger.debug("wrote %d record(s) for event %d", count, event_number)
        return count


def _record_lines(store: EventStore, converter: Converter, store_key: StoreKey, payload: Any) -> list[str]:
    info = store.registry.by_id(store_key.class_id)
    type_name = info.type_name if info else converter.type.__name__
    data = converter.encode(payload)
    links: list[str] = []
    if converter.carries_links:
        head, *links = data.decode("utf-8").split("\n")
        data = head.encode("utf-8")
    record = (f"{RECORD_TAG} {store_key.class_id} {_b64(store_key.key.encode('utf-8'))} "
              f"{type_name} {_b64(data)}")
    return [record] + links


def write_store(
    store: EventStore,
    sink: IO,
    event_number: Optional[int] = None,
    converters: Optional[ConverterRegistry] = None,
) -> int:
    """Write a complete single-event store file; returns the record count."""
    writer = ImageWriter(sink, converters)
    writer.write_header()
    return writer.write_event(store, store.epoch if event_number is None else event_number)


def _decode(store: EventStore, record: ObjectRecord, data: bytes) -> Any:
    try:
        obj = store.converters.decode(record.class_id, data)
    except Exception as e:
        raise DecodeFailed(record.describe(), e) from e
    bind = getattr(obj, "bind", None)
    if callable(bind):
        bind(store)
    return obj


def _check_known(record: ObjectRecord, db: ClidDatabase) -> None:
    name = db.name_of(record.class_id)
    if name is None:
        raise UnknownClassId(f"class id {record.class_id} at line {record.line} is not in the class id database")
    if name != record.type_name:
        raise UnknownClassId(
            f"line {record.line}: class id {record.class_id} is '{name}' in the database, "
            f"file says '{record.type_name}'"
        )


def install_event(
    event: EventImage,
    store: EventStore,
    clid_db: Optional[ClidDatabase] = None,
    lazy: bool = True,
) -> int:
    """Put one event's records into ``store``; returns how many."""
    db = clid_db if clid_db is not None else store.registry.database
    seen: set[StoreKey] = set()
    for record in event.records:
        _check_known(record, db)
        store.converters.get(record.class_id)
        if record.store_key in store or record.store_key in seen:
            raise DuplicateKey(f"{record.describe()} is already in the store")
        seen.add(record.store_key)

    # nothing is inserted until every record has passed
    staged = []
    for record in event.records:
        converter = store.converters.get(record.class_id)
        data = record.canonical_payload()
        if lazy:
            staged.append((record, converter, partial(_decode, store, record, data)))
        else:
            staged.append((record, converter, _decode(store, record, data)))

    for record, converter, item in staged:
        if lazy:
            store.register_loader(converter.type, record.key, item)
        else:
            store.lock(store.record(item, record.key))

    logger.debug("installed %d %s record(s) from event %d",
                 len(event.records), "lazy" if lazy else "eager", event.number)
    return len(event.records)


def _select(image: StoreImage, event: Optional[int]) -> Optional[EventImage]:
    if event is not None:
        return image.event(event)
    return image.events[0] if image.events else None


def read_store_lazy(
    source: Union[IO, bytes, str],
    store: EventStore,
    clid_db: Optional[ClidDatabase] = None,
    event: Optional[int] = None,
) -> int:
    """Install one virtual proxy per record; nothing is decoded yet.

    Without ``event`` the first event in the file is used.
    """
    selected = _select(parse_image(source, store.converters), event)
    return install_event(selected, store, clid_db, lazy=True) if selected else 0


def read_store_eager(
    source: Union[IO, bytes, str],
    store: EventStore,
    clid_db: Optional[ClidDatabase] = None,
    event: Optional[int] = None,
) -> int:
    """Decode every record now and install it as a published object."""
    selected = _select(parse_image(source, store.converters), event)
    return install_event(selected, store, clid_db, lazy=False) if selected else 0
