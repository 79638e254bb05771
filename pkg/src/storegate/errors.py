"""Exception hierarchy for StoreGate.

Every error carries a stable ``category`` token and the CLI ``exit_code``
used when it escapes a command.
"""

from typing import Optional


class StoreGateError(Exception):
    """Base class for all StoreGate errors."""

    category: str = "runtime_error"
    exit_code: int = 3


# I/O and configuration

class IoError(StoreGateError):
    """A file could not be read or written."""

    category = "io_error"
    exit_code = 1

    def __init__(self, path, cause: Optional[BaseException] = None):
        self.path = str(path)
        self.cause = cause
        detail = f": {cause.strerror or cause}" if isinstance(cause, OSError) else ""
        super().__init__(f"{self.path}{detail}")


class ConfigError(StoreGateError):
    category = "config_error"
    exit_code = 2


class ParseError(StoreGateError, ValueError):
    """Malformed line in a text artifact."""

    category = "parse_error"

    def __init__(self, line: int, message: str = "malformed line"):
        self.line = line
        super().__init__(f"line {line}: {message}")


# ClassID registry

class EmptyName(StoreGateError, ValueError):
    category = "empty_name"


class DuplicateId(StoreGateError):
    """Class id already bound to another type name."""

    category = "duplicate_id"
    exit_code = 4

    def __init__(self, existing_name: str, class_id: int):
        self.existing_name = existing_name
        self.class_id = class_id
        super().__init__(f"class id {class_id} already bound to '{existing_name}'")


class DuplicateName(StoreGateError):
    """Type name already bound to another class id."""

    category = "duplicate_name"
    exit_code = 4

    def __init__(self, existing_id: int, type_name: str):
        self.existing_id = existing_id
        self.type_name = type_name
        super().__init__(f"type '{type_name}' already bound to class id {existing_id}")


class ConflictError(StoreGateError):
    category = "conflict"
    exit_code = 4


# Store

class DuplicateKey(StoreGateError):
    category = "duplicate_key"


class UnregisteredType(StoreGateError):
    category = "unregistered_type"


class InvalidKey(StoreGateError, ValueError):
    category = "invalid_key"


class NotFound(StoreGateError, LookupError):
    category = "not_found"

    def __str__(self) -> str:
        # LookupError would quote the message
        return str(self.args[0]) if self.args else ""


class Ambiguous(StoreGateError):
    category = "ambiguous"


class LoadFailed(StoreGateError):
    """A virtual proxy's loader raised."""

    category = "load_failed"

    def __init__(self, store_key, cause: BaseException):
        self.store_key = store_key
        self.cause = cause
        super().__init__(f"loading {store_key} failed: {cause}")


class TypeMismatch(StoreGateError):
    category = "type_mismatch"


class Locked(StoreGateError):
    category = "locked"


class StaleHandle(StoreGateError):
    category = "stale_handle"


class ReadOnlyError(StoreGateError, TypeError):
    category = "read_only"


# Links

class ElementNotInContainer(StoreGateError):
    category = "element_not_in_container"


class IndexOutOfRange(StoreGateError, IndexError):
    category = "index_out_of_range"


class NoPolicyForKind(StoreGateError):
    category = "no_policy_for_kind"


# Persistence

class ConverterConflict(StoreGateError):
    category = "converter_conflict"


class MissingConverter(StoreGateError):
    category = "missing_converter"

    def __init__(self, class_id: int):
        self.class_id = class_id
        super().__init__(f"no converter registered for class id {class_id}")


class UnknownClassId(StoreGateError):
    category = "unknown_class_id"


class DecodeFailed(StoreGateError):
    category = "decode_failed"

    def __init__(self, record: str, cause: Optional[BaseException] = None):
        self.record = record
        self.cause = cause
        super().__init__(f"cannot decode record {record}: {cause}")


# Pipeline

class AlgorithmError(StoreGateError):
    """A store error raised inside an algorithm, tagged with where it happened."""

    def __init__(self, algorithm: str, event: int, cause: StoreGateError):
        self.algorithm = algorithm
        self.event = event
        self.cause = cause
        self.category = cause.category
        self.exit_code = cause.exit_code
        super().__init__(f"algorithm '{algorithm}' failed on event {event}: {cause}")
