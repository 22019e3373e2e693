"""Bus geometry and core placement."""

from __future__ import annotations

from pydantic import BaseModel, Field

from src.common.errors import BusProgramError
from src.sentryc.dfg import DataflowGraph

Placement = dict[int, int]


class BusTopology(BaseModel):
    """A single row of core slots crossed by parallel lanes.

    Boundary ``b`` separates positions ``b`` and ``b + 1``; every lane has one
    switch per boundary.
    """

    num_lanes: int = Field(..., ge=1)
    num_positions: int = Field(..., ge=1)
    segment_length_um: float = Field(100.0, gt=0)

    class Config:
        frozen = True

    @property
    def boundaries(self) -> list[int]:
        return list(range(self.num_positions - 1))

    @property
    def switches(self) -> list[tuple[int, int]]:
        return [(lane, b) for lane in range(self.num_lanes) for b in self.boundaries]

    def wire_length(self, lo: int, hi: int) -> float:
        return (hi - lo) * self.segment_length_um


def place_cores(dfg: DataflowGraph) -> Placement:
    """Cores along the bus in topological order of their sub-networks, ties by id."""
    return {sid: pos for pos, sid in enumerate(dfg.topological_order())}


def check_placement(placement: Placement, topology: BusTopology) -> None:
    used = sorted(placement.values())
    if len(set(used)) != len(used):
        raise BusProgramError("two cores share one bus position")
    if used and (used[0] < 0 or used[-1] >= topology.num_positions):
        raise BusProgramError(
            f"bus has {topology.num_positions} position(s), placement uses {used[-1]}"
        )


def span(placement: Placement, src: int, dst: int) -> tuple[int, int]:
    a, b = placement[src], placement[dst]
    return min(a, b), max(a, b)
