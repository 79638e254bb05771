"""Event loop: runs configured algorithms over events, one store per run."""

import hashlib
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from ..clid import ClidDatabase, load_db
from ..errors import AlgorithmError, ConfigError, IoError, StoreGateError
from ..persistence import StoreImage, install_event, parse_image
from ..store import ClearScope, EventStore, Lifetime, StoreKey
from .algorithms import AlgContext, Algorithm, StoreWriter, create_algorithm
from .config import Mode, PipelineConfig

logger = logging.getLogger(__name__)


@dataclass
class EventReport:
    """Counters for one processed event."""
    event: int
    records: int
    retrieves: int
    faults: int
    decodes: int
    locked_refusals: int
    published: int
    elapsed_ms: float
    digest: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunReport:
    """Result of a pipeline run."""
    mode: str
    events: list[EventReport] = field(default_factory=list)
    output: Optional[str] = None
    elapsed_ms: float = 0.0

    @property
    def total_records(self) -> int:
        return sum(e.records for e in self.events)

    @property
    def total_faults(self) -> int:
        return sum(e.faults for e in self.events)

    @property
    def total_decodes(self) -> int:
        return sum(e.decodes for e in self.events)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "output": self.output,
            "elapsed_ms": self.elapsed_ms,
            "totals": {
                "events": len(self.events),
                "records": self.total_records,
                "faults": self.total_faults,
                "decodes": self.total_decodes,
            },
            "events": [e.to_dict() for e in self.events],
        }


class EventLoop:
    """Sequential event loop over one :class:`EventStore`.

    After each algorithm the store's new objects are locked with the
    algorithm's instance name as publisher; at the end of each event the
    event-lifetime objects are cleared.
    """

    def __init__(
        self,
        config: PipelineConfig,
        store: Optional[EventStore] = None,
        on_event: Optional[Callable[[EventReport], None]] = None,
    ):
        self.config = config
        self.store = store if store is not None else EventStore()
        self.on_event = on_event
        self.algorithms: list[tuple[Algorithm, Lifetime]] = self._build()
        self._job_outputs: dict[str, list[StoreKey]] = {}

    def _build(self) -> list[tuple[Algorithm, Lifetime]]:
        config = self.config
        algorithms = []
        for spec in config.algorithms:
            params = dict(spec.params)
            if spec.kind == "StoreWriter":
                if config.output_override is not None:
                    params["out"] = str(config.output_override)
                elif "out" in params:
                    params["out"] = str(config.resolve(params["out"]))
                elif config.output is not None:
                    params["out"] = str(config.output)
            algorithm = create_algorithm(spec.kind, spec.name, params, base_seed=config.seed)
            algorithms.append((algorithm, spec.lifetime))

        has_writer = any(isinstance(a, StoreWriter) for a, _ in algorithms)
        if config.mode is Mode.PRODUCE and config.output is not None and not has_writer:
            algorithms.append((StoreWriter("StoreWriter", {"out": str(config.output)}), Lifetime.EVENT))
        return algorithms

    @property
    def output(self) -> Optional[str]:
        for algorithm, _ in self.algorithms:
            if isinstance(algorithm, StoreWriter) and algorithm.path is not None:
                return str(algorithm.path)
        return None

    def run(self) -> RunReport:
        start = time.perf_counter()
        clid_db = self._check_clid_db()
        report = RunReport(mode=self.config.mode.value, output=self.output)
        logger.info("running %d algorithm(s) in %s mode", len(self.algorithms), report.mode)

        initialized: list[Algorithm] = []
        try:
            for algorithm, _ in self.algorithms:
                algorithm.initialize()
                initialized.append(algorithm)
            if self.config.mode is Mode.PRODUCE:
                count = 1 if self.config.events is None else self.config.events
                for number in range(count):
                    self._emit(report, self._run_event(number))
            else:
                lazy = self.config.mode is Mode.CONSUME_LAZY
                image = self._read_input()
                events = image.events if self.config.events is None else image.events[:self.config.events]
                for event in events:
                    def setup(event=event):
                        install_event(event, self.store, clid_db, lazy=lazy)
                    self._emit(report, self._run_event(event.number, setup))
        finally:
            for algorithm in initialized:
                algorithm.finalize()

        report.elapsed_ms = (time.perf_counter() - start) * 1000
        logger.info("processed %d event(s), %d record(s)", len(report.events), report.total_records)
        return report

    def _emit(self, report: RunReport, event_report: EventReport) -> None:
        report.events.append(event_report)
        if self.on_event:
            self.on_event(event_report)

    def _job_outputs_present(self, name: str) -> bool:
        """Job-lifetime producers run once; their outputs serve later events."""
        recorded = self._job_outputs.get(name)
        return bool(recorded) and all(store_key in self.store for store_key in recorded)

    def _check_clid_db(self) -> Optional[ClidDatabase]:
        if self.config.clid_db is None:
            return None
        db = load_db(self.config.clid_db)
        registry = self.store.registry
        conflicts = registry.check_against(db)
        if not conflicts.is_clean():
            details = "; ".join(c.describe() for c in conflicts.conflicts)
            raise ConfigError(f"{self.config.clid_db} disagrees with the registered types: {details}")
        entries = set(db.entries) | set(registry.database.entries)
        return ClidDatabase(tuple(sorted(entries, key=lambda e: (e.id, e.type_name))), db.source_path)

    def _read_input(self) -> StoreImage:
        path = self.config.input
        try:
            with open(path, "rb") as f:
                data = f.read()
        except OSError as e:
            raise IoError(path, e) from e
        return parse_image(data, self.store.converters)

    def _run_event(self, number: int, setup: Optional[Callable[[], None]] = None) -> EventReport:
        store = self.store
        start = time.perf_counter()
        faults_before = store.fault_count
        decodes_before = store.converters.total_decodes
        if setup:
            setup()

        contexts: list[AlgContext] = []
        published = 0
        for algorithm, lifetime in self.algorithms:
            if self._job_outputs_present(algorithm.name):
                logger.debug("%s: job-lifetime output already in the store, skipped", algorithm.name)
                continue
            ctx = AlgContext(store, algorithm.name, number, lifetime)
            try:
                algorithm.execute(ctx)
            except AlgorithmError:
                raise
            except StoreGateError as e:
                raise AlgorithmError(algorithm.name, number, e) from e
            published += store.lock_new(algorithm.name)
            contexts.append(ctx)
            if lifetime is Lifetime.JOB and ctx.recorded:
                self._job_outputs[algorithm.name] = list(ctx.recorded)

        digest = hashlib.sha256()
        for ctx in contexts:
            for store_key in ctx.recorded:
                digest.update(f"{store_key.class_id} {store_key.key}\n".encode("utf-8"))
                digest.update(store.bucket(store_key).encode())
                digest.update(b"\n")

        event_report = EventReport(
            event=number,
            records=sum(len(c.recorded) for c in contexts),
            retrieves=sum(c.retrieves for c in contexts),
            faults=store.fault_count - faults_before,
            decodes=store.converters.total_decodes - decodes_before,
            locked_refusals=sum(c.locked_refusals for c in contexts),
            published=published,
            elapsed_ms=(time.perf_counter() - start) * 1000,
            digest=digest.hexdigest(),
        )
        store.clear(ClearScope.EVENT_ONLY)
        logger.info("event %d: %d record(s), %d fault(s)", number, event_report.records, event_report.faults)
        return event_report


def run_pipeline(
    config: PipelineConfig,
    store: Optional[EventStore] = None,
    on_event: Optional[Callable[[EventReport], None]] = None,
) -> RunReport:
    """Run ``config`` in whatever mode it names."""
    return EventLoop(config, store, on_event).run()


def replay_consume(
    config: PipelineConfig,
    store: Optional[EventStore] = None,
    on_event: Optional[Callable[[EventReport], None]] = None,
) -> RunReport:
    """Run consumer algorithms over the events of ``config.input``."""
    if not config.mode.is_consume:
        raise ConfigError(f"replay needs a consume mode, config says {config.mode.value}")
    return EventLoop(config, store, on_event).run()
