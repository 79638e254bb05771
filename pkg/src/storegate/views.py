"""Read-only views of published objects.

Downstream consumers get a :class:`ConstView` instead of the object: reads
pass through (nested containers come back wrapped as well), writes raise
:class:`ReadOnlyError`.
"""

import dataclasses
from typing import Any

from .errors import ReadOnlyError

MUTATORS = frozenset({
    "append", "extend", "insert", "pop", "remove", "clear", "sort", "reverse",
    "update", "setdefault", "popitem", "add", "discard",
    "difference_update", "intersection_update", "symmetric_difference_update",
    "__setitem__", "__delitem__", "__iadd__", "__isub__", "__imul__", "__ior__", "__iand__", "__ixor__",
})

# copies are private to the caller and come back writable
_COPIERS = frozenset({"copy", "__copy__"})

_IMMUTABLE =(int, float, complex, str, bytes, bool, type(None), frozenset, range)


def const(value: Any) -> Any:
    """Wrap ``value`` unless it is already immutable."""
    if isinstance(value, _IMMUTABLE) or isinstance(value, ConstView):
        return value
    if isinstance(value, tuple):
        items = tuple(const(v) for v in value)
        # keeps named tuples intact when nothing needed wrapping
        if all(a is b for a, b in zip(items, value)):
            return value
        return items
    if dataclasses.is_dataclass(value) and value.__dataclass_params__.frozen:
        return value
    return ConstView(value)


def unwrap(value: Any) -> Any:
    """The object behind a view (or the value itself). For store internals."""
    if isinstance(value, ConstView):
        return object.__getattribute__(value, "_target")
    return value


class ConstView:
    """Read-only proxy around a stored object.

    Writes are refused by name: attribute assignment, item assignment, the
    methods in ``MUTATORS`` and whatever the stored type lists in
    ``__sg_mutators__``. Any other method runs against the real object, so a
    user type whose mutating methods are not declared there can still be
    changed through its view.
    """

    __slots__ = ("_target",)

    def __init__(self, target: Any):
        object.__setattr__(self, "_target", target)

    def _mutators(self) -> frozenset:
        target = object.__getattribute__(self, "_target")
        return MUTATORS | frozenset(getattr(type(target), "__sg_mutators__", ()))

    def __getattr__(self, name: str) -> Any:
        if name in self._mutators():
            raise ReadOnlyError(f"'{name}' is not allowed on a published object")
        target = object.__getattribute__(self, "_target")
        value = getattr(target, name)
        if name in _COPIERS:
            return value
        if callable(value):
            def call(*args, **kwargs):
                return const(value(*args, **kwargs))
            return call
        return const(value)

    def __setattr__(self, name: str, value: Any) -> None:
        raise ReadOnlyError(f"cannot set '{name}' on a published object")

    def __delattr__(self, name: str) -> None:
        raise ReadOnlyError(f"cannot delete '{name}' on a published object")

    def __getitem__(self, item: Any) -> Any:
        return const(object.__getattribute__(self, "_target")[item])

    def __setitem__(self, item: Any, value: Any) -> None:
        raise ReadOnlyError("cannot assign into a published object")

    def __delitem__(self, item: Any) -> None:
        raise ReadOnlyError("cannot delete from a published object")

    def __iter__(self):
        for value in object.__getattribute__(self, "_target"):
            yield const(value)

    def __len__(self) -> int:
        return len(object.__getattribute__(self, "_target"))

    def __contains__(self, item: Any) -> bool:
        return unwrap(item) in object.__getattribute__(self, "_target")

    def __bool__(self) -> bool:
        return bool(object.__getattribute__(self, "_target"))

    def __eq__(self, other: Any) -> bool:
        return object.__getattribute__(self, "_target") == unwrap(other)

    def __ne__(self, other: Any) -> bool:
        return not self == other

    __hash__ = None

    def __repr__(self) -> str:
        return f"ConstView({object.__getattribute__(self, '_target')!r})"
