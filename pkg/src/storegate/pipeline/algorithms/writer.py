"""Output algorithm writing each event to a store file."""

import logging
from pathlib import Path
from typing import IO, Optional

from ...errors import ConfigError, IoError
from ...persistence import ImageWriter
from .base import AlgContext, Algorithm

logger = logging.getLogger(__name__)


class StoreWriter(Algorithm):
    """Writes the store contents of every event to ``out``.

    The file is opened (and truncated) in :meth:`initialize` and closed in
    :meth:`finalize`.
    """

    kind = "StoreWriter"
    description = "Write each event's store contents to a store file"
    parameters = {"out": "output file path (default: the configuration's OUT)"}

    def configure(self) -> None:
        self.path: Optional[Path] = Path(self.params["out"]) if "out" in self.params else None
        self._sink: Optional[IO] = None
        self._writer: Optional[ImageWriter] = None
        self.written = 0

    def initialize(self) -> None:
        if self.path is None:
            raise ConfigError(f"StoreWriter '{self.name}' has no output path (set out= or OUT)")
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._sink = open(self.path, "wb")
        except OSError as e:
            raise IoError(self.path, e) from e
        self._writer = ImageWriter(self._sink)
        self._writer.write_header()

    def execute(self, ctx: AlgContext) -> None:
        self.written += ctx.persist(self._writer)

    def finalize(self) -> None:
        if self._sink is not None:
            self._sink.close()
            self._sink = None
            logger.info("%s wrote %d record(s) to %s", self.name, self.written, self.path)
