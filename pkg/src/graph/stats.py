"""L1/L2 neighbour statistics.

L1(n) is the set of pre-synaptic neurons of n; L2(n) is the set of
pre-synaptic neurons of those. Summary figures are taken over neurons that
receive at least one synapse (all neurons when none does), so source neurons
do not drag the minimum to zero.
"""

from __future__ import annotations

import logging

from pydantic import BaseModel

from src.graph.model import SdcnnGraph

log = logging.getLogger(__name__)


class NeighborStats(BaseModel):
    l1: dict[int, int]
    l2: dict[int, int]
    l1_min: int
    l1_max: int
    l1_avg: float
    l2_min: int
    l2_max: int
    l2_avg: float

    class Config:
        frozen = True

    def summary(self) -> dict[str, float]:
        return self.dict(exclude={"l1", "l2"})


def neighbor_stats(g: SdcnnGraph) -> NeighborStats:
    l1: dict[int, int] = {}
    l2: dict[int, int] = {}
    for nid in g.ids:
        pre = g.predecessors(nid)
        l1[nid] = len(pre)
        second: set[int] = set()
        for p in pre:
            second.update(g.predecessors(p))
        l2[nid] = len(second)
    scope = [nid for nid in g.ids if l1[nid] > 0] or g.ids
    a = [l1[n] for n in scope]
    b = [l2[n] for n in scope]
    stats = NeighborStats(
        l1=l1,
        l2=l2,
        l1_min=min(a),
        l1_max=max(a),
        l1_avg=sum(a) / len(a),
        l2_min=min(b),
        l2_max=max(b),
        l2_avg=sum(b) / len(b),
    )
    log.debug("neighbour stats for %s: %s", g.name, stats.summary())
    return stats
