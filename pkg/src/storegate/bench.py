"""Retrieval micro-benchmark.

Fills a store with ``objects`` number sequences under distinct keys and times
``retrieves`` lookups of one flavor:

- ``keyed``: retrieve by a random existing key
- ``default``: retrieve without a key (resolves to the default-key instance)
- ``range``: retrieve_range over a second type with a few instances
"""

import random
import statistics
import time
from dataclasses import dataclass
from enum import Enum

from .edm import NumberSequence, StringMap
from .errors import ConfigError
from .store import EventStore


class Flavor(str, Enum):
    KEYED = "keyed"
    DEFAULT = "default"
    RANGE = "range"


@dataclass
class BenchReport:
    objects: int
    retrieves: int
    flavor: str
    median_ns: float
    p99_ns: float
    total_s: float

    def to_dict(self) -> dict:
        return {
            "objects": self.objects,
            "retrieves": self.retrieves,
            "flavor": self.flavor,
            "median_ns": self.median_ns,
            "p99_ns": self.p99_ns,
            "total_s": self.total_s,
        }


def _p99(samples: list[int]) -> float:
    if len(samples) == 1:
        return float(samples[0])
    return statistics.quantiles(samples, n=100, method="inclusive")[98]


def populate(store: EventStore, objects: int) -> list[str]:
    keys = [f"obj{i:07d}" for i in range(objects)]
    for i, key in enumerate(keys):
        store.record(NumberSequence([i]), key)
    # default-key instance so keyless retrieval resolves with several present
    store.record(NumberSequence([-1]))
    for i in range(3):
        store.record(StringMap({"i": i}), f"map{i}")
    return keys


def run_bench(objects: int, retrieves: int, flavor: str = "keyed", seed: int = 0) -> BenchReport:
    if objects < 1 or retrieves < 1:
        raise ConfigError("objects and retrieves must both be at least 1")
    try:
        flavor = Flavor(flavor)
    except ValueError:
        raise ConfigError(f"unknown bench flavor {flavor!r}") from None

    store = EventStore(name="bench")
    keys = populate(store, objects)
    rng = random.Random(seed)
    order = [keys[rng.randrange(objects)] for _ in range(retrieves)]

    samples: list[int] = []
    clock = time.perf_counter_ns
    start = time.perf_counter()
    if flavor is Flavor.KEYED:
        for key in order:
            t0 = clock()
            store.retrieve(NumberSequence, key)
            samples.append(clock() - t0)
    elif flavor is Flavor.DEFAULT:
        for _ in range(retrieves):
            t0 = clock()
            store.retrieve(NumberSequence)
            samples.append(clock() - t0)
    else:
        for _ in range(retrieves):
            t0 = clock()
            store.retrieve_range(StringMap)
            samples.append(clock() - t0)
    total = time.perf_counter() - start

    return BenchReport(
        objects=objects,
        retrieves=retrieves,
        flavor=flavor.value,
        median_ns=float(statistics.median(samples)),
        p99_ns=float(_p99(samples)),
        total_s=total,
    )
