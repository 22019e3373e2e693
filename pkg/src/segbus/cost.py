"""Energy and latency of channel traffic on the segmented bus or on a mesh NoC."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from typing import Literal

from pydantic import BaseModel, Field, root_validator

from src.hw.config import InterconnectConfig, NocConstants, SegbusConstants
from src.sentryc.dfg import DataflowGraph
from src.segbus.planner import BusProgram
from src.segbus.topology import Placement

log = logging.getLogger(__name__)


class NocDescriptor(BaseModel):
    """Mesh NoC with deterministic XY routing; core ``p`` sits at (p % cols, p // cols)."""

    dfg_hash: str = ""
    rows: int = Field(..., ge=1)
    cols: int = Field(..., ge=1)
    hop_energy_pj: float = Field(..., ge=0)
    hop_latency_ps: int = Field(..., ge=0)
    routing: Literal["xy"] = "xy"
    placement: dict[int, int]
    endpoints: dict[int, tuple[int, int]] = {}

    class Config:
        frozen = True

    @root_validator(skip_on_failure=True)
    def _fits(cls, values: dict) -> dict:
        slots = values["rows"] * values["cols"]
        for core, pos in values["placement"].items():
            if not 0 <= pos < slots:
                raise ValueError(f"core {core} at slot {pos}, mesh has {slots}")
        return values

    def coords(self, core: int) -> tuple[int, int]:
        pos = self.placement[core]
        return pos % self.cols, pos // self.cols

    def hops(self, src: int, dst: int) -> int:
        (x1, y1), (x2, y2) = self.coords(src), self.coords(dst)
        return abs(x1 - x2) + abs(y1 - y2)

    def route(self, src: int, dst: int) -> list[tuple[int, int]]:
        """Mesh coordinates visited, X first then Y."""
        (x, y), (x2, y2) = self.coords(src), self.coords(dst)
        path = [(x, y)]
        while x != x2:
            x += 1 if x2 > x else -1
            path.append((x, y))
        while y != y2:
            y += 1 if y2 > y else -1
            path.append((x, y))
        return path


def build_noc(
    dfg: DataflowGraph,
    placement: Placement,
    constants: NocConstants | None = None,
    *,
    dfg_hash: str = "",
) -> NocDescriptor:
    """Smallest near-square mesh that holds every core, in placement order."""
    constants = constants or NocConstants()
    n = max(len(placement), 1)
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    return NocDescriptor(
        dfg_hash=dfg_hash,
        rows=rows,
        cols=cols,
        hop_energy_pj=constants.hop_energy_pj,
        hop_latency_ps=constants.hop_latency_ps,
        placement=dict(placement),
        endpoints={c.id: (c.src_subnet, c.dst_subnet) for c in dfg.channels},
    )


class InterconnectCost(BaseModel):
    kind: Literal["segbus", "noc"]
    energy_pj: float
    latency_ps: int
    spike_energy_pj: dict[int, float]
    spike_latency_ps: dict[int, int]

    class Config:
        frozen = True


def per_spike(
    fabric: BusProgram | NocDescriptor, constants: InterconnectConfig | None = None
) -> tuple[dict[int, float], dict[int, int]]:
    """Energy (pJ) and latency (ps) of one spike on every channel."""
    constants = constants or InterconnectConfig()
    energy: dict[int, float] = {}
    latency: dict[int, int] = {}
    if isinstance(fabric, BusProgram):
        sb: SegbusConstants = constants.segbus
        for r in fabric.routes:
            energy[r.channel] = r.segments * sb.segment_energy_pj
            latency[r.channel] = r.segments * sb.segment_latency_ps
        return energy, latency
    for cid, (src, dst) in fabric.endpoints.items():
        hops = fabric.hops(src, dst)
        energy[cid] = hops * fabric.hop_energy_pj
        latency[cid] = hops * fabric.hop_latency_ps
    return energy, latency


def interconnect_cost(
    fabric: BusProgram | NocDescriptor,
    traffic: Mapping[int, int],
    constants: InterconnectConfig | None = None,
) -> InterconnectCost:
    """Total energy and summed transfer latency of *traffic* (spikes per channel).

    The segmented bus charges only the segments between the two cores and
    makes no routing decision; the NoC pays link and router cost per XY hop.
    """
    energy, latency = per_spike(fabric, constants)
    unknown = sorted(set(traffic) - set(energy))
    if unknown:
        raise KeyError(f"channel {unknown[0]} is not routed")
    total_e = sum(traffic[c] * energy[c] for c in sorted(traffic))
    total_l = sum(traffic[c] * latency[c] for c in sorted(traffic))
    kind: Literal["segbus", "noc"] = "segbus" if isinstance(fabric, BusProgram) else "noc"
    log.debug("%s traffic: %d spikes, %.3f pJ", kind, sum(traffic.values()), total_e)
    return InterconnectCost(
        kind=kind,
        energy_pj=total_e,
        latency_ps=total_l,
        spike_energy_pj=energy,
        spike_latency_ps=latency,
    )
