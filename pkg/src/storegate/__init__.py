"""StoreGate - a blackboard transient data store for event processing."""

__version__ = "0.1.0"

from .clid import ClassRegistry, ClidDatabase, TypeEntry, assign_id, class_registry, storable
from .converters import Converter, ConverterRegistry, converters, register_converter
from .errors import StoreGateError
from .keys import register_key_adapter
from .store import ClearScope, DataHandle, EventStore, Lifetime, StoreKey
from .views import ConstView
from . import edm
from .links import ElementLink, ElementLinkVector, ObjectLink, make_element_link, make_object_link
from .persistence import read_store_eager, read_store_lazy, write_store

__all__ = [
    "__version__",
    "ClassRegistry",
    "ClearScope",
    "ClidDatabase",
    "ConstView",
    "Converter",
    "ConverterRegistry",
    "DataHandle",
    "ElementLink",
    "ElementLinkVector",
    "EventStore",
    "Lifetime",
    "ObjectLink",
    "StoreGateError",
    "StoreKey",
    "TypeEntry",
    "assign_id",
    "class_registry",
    "converters",
    "edm",
    "make_element_link",
    "make_object_link",
    "read_store_eager",
    "read_store_lazy",
    "register_converter",
    "register_key_adapter",
    "storable",
    "write_store",
]
