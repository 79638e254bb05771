"""Cluster producer."""

import math
import random

from ...edm import Cluster, ClusterCollection
from .base import AlgContext, Algorithm


class ClusterMaker(Algorithm):
    """Records a seeded pseudo-random cluster collection."""

    kind = "ClusterMaker"
    description = "Generate a pseudo-random ClusterCollection"
    parameters = {
        "n": "number of clusters per event (default 5)",
        "seed": "random seed (default 0)",
        "key": "output key (default: instance name)",
    }

    def configure(self) -> None:
        self.n = self.param_int("n", 5)
        self.seed = self.param_int("seed", 0) + self.base_seed
        self.key = self.param_str("key")

    def execute(self, ctx: AlgContext) -> None:
        rng = random.Random(f"clusters:{self.seed}:{ctx.event}")
        clusters = ClusterCollection(
            Cluster(
                id=i,
                energy=round(rng.expovariate(0.1), 4),
                eta=round(rng.uniform(-2.5, 2.5), 4),
                phi=round(rng.uniform(-math.pi, math.pi), 4),
            )
            for i in range(self.n)
        )
        ctx.record(clusters, self.key)
