"""Lane minimisation and switch programming for the segmented bus.

Two channels conflict when their activity windows overlap in time and their
segment intervals share a position. Lanes are a colouring of the conflict
graph: greedy by interval start for the plan, exact backtracking on small
instances to report how far greedy is from optimal.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence

import networkx as nx
from pydantic import BaseModel

from src.common.diagnostics import validate_io
from src.common.errors import BusProgramError
from src.sentryc.dfg import DataflowGraph
from src.segbus.topology import BusTopology, Placement, check_placement, span

log = logging.getLogger(__name__)

Window = tuple[int, int]
Activity = Mapping[int, Sequence[Window]]

EXACT_LIMIT = 12


def windows_overlap(a: Iterable[Window], b: Iterable[Window]) -> bool:
    """Half-open [start, end) windows; any overlapping pair counts."""
    b = list(b)
    return any(s1 < e2 and s2 < e1 for s1, e1 in a for s2, e2 in b)


def spans_intersect(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def channel_spans(dfg: DataflowGraph, placement: Placement) -> dict[int, tuple[int, int]]:
    return {c.id: span(placement, c.src_subnet, c.dst_subnet) for c in dfg.channels}


def conflict_graph(spans: Mapping[int, tuple[int, int]], activity: Activity) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(spans)
    ids = sorted(spans)
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if spans_intersect(spans[a], spans[b]) and windows_overlap(
                activity.get(a, ()), activity.get(b, ())
            ):
                g.add_edge(a, b)
    return g


def clique_bound(g: nx.Graph) -> int:
    if g.number_of_nodes() == 0:
        return 0
    return max(len(c) for c in nx.find_cliques(g))


def greedy_lanes(g: nx.Graph, spans: Mapping[int, tuple[int, int]]) -> dict[int, int]:
    lanes: dict[int, int] = {}
    for ch in sorted(spans, key=lambda c: (spans[c][0], spans[c][1], c)):
        taken = {lanes[n] for n in g.neighbors(ch) if n in lanes}
        lane = 0
        while lane in taken:
            lane += 1
        lanes[ch] = lane
    return lanes


def exact_lanes(g: nx.Graph, lower: int = 1) -> dict[int, int]:
    """Optimal colouring by backtracking, most-constrained channel first."""
    nodes = sorted(g.nodes, key=lambda n: (-g.degree(n), n))
    if not nodes:
        return {}
    for k in range(max(lower, 1), len(nodes) + 1):
        colour: dict[int, int] = {}

        def place(i: int) -> bool:
            if i == len(nodes):
                return True
            n = nodes[i]
            used = {colour[m] for m in g.neighbors(n) if m in colour}
            # a fresh colour is interchangeable with any other unused one
            fresh = max(colour.values(), default=-1) + 1
            for c in range(min(k, fresh + 1)):
                if c in used:
                    continue
                colour[n] = c
                if place(i + 1):
                    return True
                del colour[n]
            return False

        if place(0):
            return colour
    raise BusProgramError("no colouring found")  # pragma: no cover


class LanePlan(BaseModel):
    lanes: int
    assignment: dict[int, int]
    greedy_lanes: int
    lower_bound: int
    optimum: int | None = None

    class Config:
        frozen = True

    @property
    def slack(self) -> int | None:
        return None if self.optimum is None else self.greedy_lanes - self.optimum


@validate_io
def plan_lanes(dfg: DataflowGraph, placement: Placement, activity: Activity) -> LanePlan:
    spans = channel_spans(dfg, placement)
    g = conflict_graph(spans, activity)
    greedy = greedy_lanes(g, spans)
    n_greedy = max(greedy.values(), default=-1) + 1
    bound = clique_bound(g)
    optimum = None
    assignment = greedy
    if g.number_of_nodes() <= EXACT_LIMIT:
        exact = exact_lanes(g, bound)
        optimum = max(exact.values(), default=-1) + 1
        if optimum < n_greedy:
            assignment = exact
    lanes = max(assignment.values(), default=-1) + 1
    if lanes < bound:
        raise BusProgramError(f"{lanes} lane(s) below the clique bound {bound}")
    log.info(
        "lane plan for %s: %d channel(s), %d lane(s) (greedy %d, clique bound %d)",
        dfg.name,
        len(spans),
        lanes,
        n_greedy,
        bound,
    )
    return LanePlan(
        lanes=max(lanes, 1),
        assignment=assignment,
        greedy_lanes=max(n_greedy, 1),
        lower_bound=bound,
        optimum=optimum,
    )


def min_lanes(dfg: DataflowGraph, placement: Placement, activity: Activity) -> int:
    """Fewest lanes that carry every channel without a conflict (at least one)."""
    return plan_lanes(dfg, placement, activity).lanes


# --------------------------------------------------------------------------- #
# bus program                                                                 #
# --------------------------------------------------------------------------- #
class Route(BaseModel):
    channel: int
    lane: int
    lo: int
    hi: int
    windows: tuple[Window, ...] = ()

    class Config:
        frozen = True

    @property
    def segments(self) -> int:
        return self.hi - self.lo

    @property
    def closed_switches(self) -> list[int]:
        """Boundaries interior to the interval: ``b`` joins positions b and b+1."""
        return list(range(self.lo, self.hi))


class BusProgram(BaseModel):
    dfg_hash: str = ""
    topology: BusTopology
    placement: dict[int, int]
    routes: tuple[Route, ...]

    class Config:
        frozen = True

    def route(self, channel: int) -> Route:
        for r in self.routes:
            if r.channel == channel:
                return r
        raise KeyError(channel)

    def switch_settings(self) -> dict[int, list[tuple[int, int]]]:
        """Per lane: (boundary, channel) for every switch closed while that channel is active."""
        lanes = range(self.topology.num_lanes)
        out: dict[int, list[tuple[int, int]]] = {lane: [] for lane in lanes}
        for r in self.routes:
            out[r.lane].extend((b, r.channel) for b in r.closed_switches)
        for lane in out:
            out[lane].sort()
        return out

    @property
    def closed_switch_count(self) -> int:
        return sum(len(r.closed_switches) for r in self.routes)


def check_conflict_free(program: BusProgram) -> None:
    routes = sorted(program.routes, key=lambda r: r.channel)
    for i, a in enumerate(routes):
        for b in routes[i + 1 :]:
            if (
                a.lane == b.lane
                and spans_intersect((a.lo, a.hi), (b.lo, b.hi))
                and windows_overlap(a.windows, b.windows)
            ):
                raise BusProgramError(
                    f"channels {a.channel} and {b.channel} collide on lane {a.lane}"
                )


@validate_io
def program_switches(
    dfg: DataflowGraph,
    placement: Placement,
    lanes: LanePlan,
    activity: Activity,
    *,
    dfg_hash: str = "",
    segment_length_um: float = 100.0,
) -> BusProgram:
    """Pin every channel to its lane and source-to-destination interval."""
    spans = channel_spans(dfg, placement)
    missing = sorted(set(spans) - set(lanes.assignment))
    if missing:
        raise BusProgramError(f"channel {missing[0]} has no lane")
    routes = []
    for cid in sorted(spans):
        lane = lanes.assignment[cid]
        if lane >= lanes.lanes:
            raise BusProgramError(f"channel {cid} on lane {lane}, bus has {lanes.lanes}")
        lo, hi = spans[cid]
        routes.append(
            Route(channel=cid, lane=lane, lo=lo, hi=hi, windows=tuple(activity.get(cid, ())))
        )
    topology = BusTopology(
        num_lanes=lanes.lanes,
        num_positions=max(placement.values(), default=0) + 1,
        segment_length_um=segment_length_um,
    )
    check_placement(placement, topology)
    program = BusProgram(
        dfg_hash=dfg_hash, topology=topology, placement=dict(placement), routes=tuple(routes)
    )
    check_conflict_free(program)
    log.info(
        "bus program: %d lane(s), %d position(s), %d closed switch(es)",
        topology.num_lanes,
        topology.num_positions,
        program.closed_switch_count,
    )
    return program
