"""Track producers and consumers."""

import logging
import random

from ...edm import Track, TrackCollection
from ...errors import Locked
from .base import AlgContext, Algorithm

logger = logging.getLogger(__name__)


def _rng(seed: int, event: int) -> random.Random:
    # one independent stream per (seed, event)
    return random.Random(f"{seed}:{event}")


class TrackMaker(Algorithm):
    """Records a seeded pseudo-random track collection."""

    kind = "TrackMaker"
    description = "Generate a pseudo-random TrackCollection"
    parameters = {
        "n": "number of tracks per event (default 10)",
        "seed": "random seed (default 0)",
        "key": "output key (default: instance name)",
    }

    def configure(self) -> None:
        self.n = self.param_int("n", 10)
        self.seed = self.param_int("seed", 0) + self.base_seed
        self.key = self.param_str("key")

    def execute(self, ctx: AlgContext) -> None:
        rng = _rng(self.seed, ctx.event)
        tracks = TrackCollection(
            Track(
                id=i,
                px=round(rng.gauss(0.0, 2.0), 4),
                py=round(rng.gauss(0.0, 2.0), 4),
                pz=round(rng.gauss(0.0, 5.0), 4),
                quality=round(rng.random(), 4),
            )
            for i in range(self.n)
        )
        ctx.record(tracks, self.key)


class TrackSelector(Algorithm):
    """Keeps the tracks whose quality reaches a threshold."""

    kind = "TrackSelector"
    description = "Filter a TrackCollection by quality"
    parameters = {
        "input": "key of the input collection (default: retrieve by type)",
        "threshold": "minimum quality, inclusive (default 0.5)",
        "key": "output key (default: instance name)",
    }

    def configure(self) -> None:
        self.input = self.param_str("input")
        self.threshold = self.param_float("threshold", 0.5)
        self.key = self.param_str("key")

    def execute(self, ctx: AlgContext) -> None:
        tracks = ctx.retrieve(TrackCollection, self.input)
        selected = TrackCollection(t for t in tracks if t.quality >= self.threshold)
        logger.debug("%s kept %d of %d tracks", self.name, len(selected), len(tracks))
        ctx.record(selected, self.key)


class TrackCalibrator(Algorithm):
    """Scales track momenta.

    Calibrates in place when the input is still writable, otherwise records a
    calibrated copy under its own key.
    """

    kind = "TrackCalibrator"
    description = "Scale track momenta, copying published inputs"
    parameters = {
        "input": "key of the input collection (default: retrieve by type)",
        "scale": "momentum scale factor (default 1.01)",
        "key": "output key for the copy (default: instance name)",
    }

    def configure(self) -> None:
        self.input = self.param_str("input")
        self.scale = self.param_float("scale", 1.01)
        self.key = self.param_str("key")

    def _calibrated(self, track: Track) -> Track:
        return Track(
            track.id,
            round(track.px * self.scale, 4),
            round(track.py * self.scale, 4),
            round(track.pz * self.scale, 4),
            track.quality,
        )

    def execute(self, ctx: AlgContext) -> None:
        try:
            tracks = ctx.retrieve_mut(TrackCollection, self.input)
        except Locked:
            logger.warning("%s: input is published, recording a calibrated copy", self.name)
            source = ctx.retrieve(TrackCollection, self.input)
            ctx.record(TrackCollection(self._calibrated(t) for t in source), self.key)
            return
        tracks[:] = [self._calibrated(t) for t in tracks]
