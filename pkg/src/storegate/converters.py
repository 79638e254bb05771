"""Converters between stored objects and their persistent byte form."""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .errors import ConverterConflict, MissingConverter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Converter:
    """Canonical encode/decode pair for one class id.

    ``decode(encode(x))`` must re-encode to the same bytes. ``probe`` builds a
    sample value used to compare two converters claiming the same id.
    ``carries_links`` marks payloads written as LINK lines in store files.
    """
    class_id: int
    type: type
    encode: Callable[[Any], bytes]
    decode: Callable[[bytes], Any]
    probe: Optional[Callable[[], Any]] = None
    carries_links: bool = False


class ConverterRegistry:
    """Converters by class id, with decode counters for instrumentation."""

    def __init__(self):
        self._by_id: dict[int, Converter] = {}
        self.decode_counts: Counter = Counter()

    def register(self, converter: Converter) -> None:
        existing = self._by_id.get(converter.class_id)
        if existing is not None and existing is not converter:
            _check_compatible(existing, converter)
        self._by_id[converter.class_id] = converter
        logger.debug("converter registered for class id %d (%s)",
                     converter.class_id, converter.type.__name__)

    def unregister(self, class_id: int) -> None:
        self._by_id.pop(class_id, None)

    def find(self, class_id: int) -> Optional[Converter]:
        return self._by_id.get(class_id)

    def get(self, class_id: int) -> Converter:
        converter = self._by_id.get(class_id)
        if converter is None:
            raise MissingConverter(class_id)
        return converter

    def __contains__(self, class_id: int) -> bool:
        return class_id in self._by_id

    def encode(self, class_id: int, obj: Any) -> bytes:
        return self.get(class_id).encode(obj)

    def decode(self, class_id: int, data: bytes) -> Any:
        converter = self.get(class_id)
        self.decode_counts[class_id] += 1
        return converter.decode(data)

    @property
    def total_decodes(self) -> int:
        return sum(self.decode_counts.values())

    def reset_counts(self) -> None:
        self.decode_counts.clear()


def _check_compatible(existing: Converter, new: Converter) -> None:
    probe = new.probe or existing.probe
    if probe is None:
        raise ConverterConflict(
            f"class id {new.class_id} already has a converter and no probe value to compare them"
        )
    value = probe()
    try:
        same = existing.encode(value) == new.encode(value)
    except Exception as e:
        raise ConverterConflict(f"class id {new.class_id}: probe encoding failed: {e}") from e
    if not same:
        raise ConverterConflict(
            f"class id {new.class_id}: converters disagree on the probe value"
        )


def register_converter(registry: ConverterRegistry, converter: Converter) -> None:
    registry.register(converter)


converters = ConverterRegistry()
