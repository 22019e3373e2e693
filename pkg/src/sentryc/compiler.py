"""Partition an SDCNN graph into core-sized sub-networks.

Walks the graph backwards from its output neurons. Each ready sink (no
residual successors) collects the residual neurons within two synapses
(one for crossbar backends) whose successors are all collected too; the
neurons just beyond become the next frontier. Spikes therefore leave a
sub-network from its l0 only. On µBrain cores, synapses entering a
sub-network below l2 are routed over port relays. Sub-networks are then
merged by the area/power rule and numbered in dataflow order.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Sequence
from itertools import chain
from typing import Literal

import networkx as nx

from src.common.diagnostics import validate_io
from src.common.errors import CompileError, NoFitError
from src.graph.io import graph_to_dict
from src.graph.model import SdcnnGraph, Synapse
from src.hw.cores import Backend, CoreConfig, LayerSizes
from src.hw.cost import CostModel, fit_config
from src.persist.artifacts import content_hash
from src.sentryc.dfg import Channel, DataflowGraph, SubNetwork, check_dataflow_graph
from src.sentryc.merge import plan_merges
from src.sentryc.partition import (
    bounded_distances,
    create_subnet,
    index_neurons,
    insert_ports,
    insert_relays,
)

log = logging.getLogger(__name__)


class _Residual:
    def __init__(self, g: SdcnnGraph) -> None:
        self.g = g
        self.live = set(g.ids)
        self.out_degree = {n: len(g.successors(n)) for n in g.ids}

    def ready(self, n: int) -> bool:
        return n in self.live and self.out_degree[n] == 0

    def remove(self, members: set[int]) -> None:
        self.live -= members
        for n in members:
            for p in self.g.predecessors(n):
                self.out_degree[p] -= 1

    def sinks(self) -> list[int]:
        return sorted(n for n in self.live if self.out_degree[n] == 0)


def _grow(g: SdcnnGraph, sink: int, residual: _Residual, limit: int) -> dict[int, int]:
    """Distances (up to limit + 1) after dropping candidates with a successor outside the group.

    Successors left in the residual graph and successors already placed both
    count, so the sink is the only member that sends spikes elsewhere.
    """
    excluded: set[int] = set()
    live = residual.live
    while True:
        dist = bounded_distances(g, sink, lambda n: n in live and n not in excluded, limit + 1)
        group = {n for n, d in dist.items() if d <= limit}
        unsealed = {n for n in group if n != sink and any(s not in group for s in g.successors(n))}
        if not unsealed:
            return dist
        excluded |= unsealed


def _chunks(
    g: SdcnnGraph, group: dict[int, int], palette: Sequence[CoreConfig]
) -> list[dict[int, int]]:
    """Split a crossbar group into index-order runs bounded by neuron and synapse capacity."""
    cap_n = max(c.neuron_capacity for c in palette)
    cap_s = max(c.synapse_capacity for c in palette)
    out: list[dict[int, int]] = [{}]
    load = 0
    for n in index_neurons(group):
        fan_in = len(g.predecessors(n))
        if fan_in > cap_s:
            raise NoFitError(f"neuron {n} has {fan_in} synapses, core holds at most {cap_s}")
        if out[-1] and (len(out[-1]) + 1 > cap_n or load + fan_in > cap_s):
            out.append({})
            load = 0
        out[-1][n] = group[n]
        load += fan_in
    return out


def _relayer(g: SdcnnGraph, piece: dict[int, int]) -> dict[int, int]:
    """Crossbar chunk layers: members feeding nothing inside the chunk are its l0."""
    return {n: int(any(s in piece for s in g.successors(n))) for n in piece}


def _union(sid: int, parts: list[SubNetwork], palette, m: CostModel) -> SubNetwork:
    sizes = sum((p.sizes for p in parts), LayerSizes())
    return SubNetwork(
        id=sid,
        l2=tuple(sorted(n for p in parts for n in p.l2)),
        l1=tuple(sorted(n for p in parts for n in p.l1)),
        l0=tuple(sorted(n for p in parts for n in p.l0)),
        internal_synapses=tuple(
            sorted((syn for p in parts for syn in p.internal_synapses), key=lambda x: x.pair)
        ),
        relays=tuple(sorted((r for p in parts for r in p.relays), key=lambda r: r.id)),
        synapse_load=sizes.synapses,
        assigned_config=fit_config(sizes, palette, m),
    )


def graph_hash(g: SdcnnGraph) -> str:
    return content_hash(graph_to_dict(g))


@validate_io
def compile_graph(
    g: SdcnnGraph,
    palette: Sequence[CoreConfig],
    cost_model: CostModel,
    backend: Backend | str = Backend.MUBRAIN,
    *,
    relay_policy: Literal["always", "programmable"] = "always",
    merge: bool = True,
) -> DataflowGraph:
    """Compile *g* into a dataflow graph of sub-networks fitted to *palette*."""
    backend = Backend(backend)
    if not palette:
        raise NoFitError("empty core palette")
    crossbar = backend is not Backend.MUBRAIN
    limit = 1 if crossbar else 2
    residual = _Residual(g)
    next_id = max(g.ids) + 1
    raw: list[SubNetwork] = []

    frontier = g.outputs()
    while residual.live:
        progress = False
        upcoming: list[int] = []
        for sink in frontier:
            if not residual.ready(sink):
                if sink in residual.live:
                    upcoming.append(sink)
                continue
            dist = _grow(g, sink, residual, limit)
            group = {n: d for n, d in dist.items() if d <= limit}
            pieces = [_relayer(g, p) for p in _chunks(g, group, palette)] if crossbar else [group]
            for piece in pieces:
                s = create_subnet(g, piece, limit=limit, sid=len(raw))
                if not crossbar:
                    s, next_id = insert_relays(s, next_id, relay_policy)
                try:
                    cfg = fit_config(s.sizes, palette, cost_model)
                except NoFitError as exc:
                    raise NoFitError(f"sub-network at sink {sink}: {exc}") from exc
                raw.append(s.copy(update={"assigned_config": cfg}))
            residual.remove(set(group))
            upcoming.extend(n for n, d in dist.items() if d == limit + 1)
            progress = True
        frontier = [n for n in dict.fromkeys(upcoming) if n in residual.live]
        if not progress or not frontier:
            frontier = residual.sinks()

    owner: dict[int, int] = {n: s.id for s in raw for n in s.neurons}
    edges: set[tuple[int, int]] = set()
    inbound: dict[int, list[Synapse]] = defaultdict(list)
    for syn in g.synapses:
        a, b = owner[syn.src], owner[syn.dst]
        if a != b:
            if a < b:
                raise CompileError(f"synapse {syn.src}->{syn.dst} points to a later sub-network")
            edges.add((a, b))
            inbound[b].append(syn)

    entering: dict[int, list[Synapse]] = {}
    for i, s in enumerate(raw):
        if crossbar:
            entering[i] = sorted(inbound[i], key=lambda x: x.pair)
            continue
        s, entering[i], next_id = insert_ports(s, inbound[i], next_id, relay_policy)
        try:
            cfg = fit_config(s.sizes, palette, cost_model)
        except NoFitError as exc:
            raise NoFitError(f"sub-network {i} with its ports: {exc}") from exc
        raw[i] = s.copy(update={"assigned_config": cfg})

    groups = (
        plan_merges(raw, edges, palette, cost_model) if merge else [[s.id] for s in raw]
    )
    label_of = {idx: gi for gi, members in enumerate(groups) for idx in members}
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(groups)))
    dag.add_edges_from((label_of[a], label_of[b]) for a, b in edges)
    order = list(nx.lexicographical_topological_sort(dag, key=lambda gi: -groups[gi][0]))
    final_id = {gi: pos for pos, gi in enumerate(order)}
    subnets = [
        _union(final_id[gi], [raw[i] for i in groups[gi]], palette, cost_model) for gi in order
    ]

    where = {n: final_id[label_of[s.id]] for s in raw for n in s.neurons}
    crossing: dict[tuple[int, int], list[Synapse]] = defaultdict(list)
    for syn in chain.from_iterable(entering.values()):
        a, b = where[syn.src], where[syn.dst]
        if a != b:
            crossing[(a, b)].append(syn)
    channels = [
        Channel(
            id=cid,
            src_subnet=a,
            dst_subnet=b,
            synapses=tuple(sorted(crossing[(a, b)], key=lambda x: x.pair)),
        )
        for cid, (a, b) in enumerate(sorted(crossing))
    ]

    dfg = DataflowGraph(
        name=g.name,
        backend=backend,
        relay_policy=relay_policy,
        graph_hash=graph_hash(g),
        neurons=g.neurons,
        subnets=tuple(subnets),
        channels=tuple(channels),
    )
    check_dataflow_graph(dfg, g)
    log.info(
        "compiled %s for %s: %d sub-networks (%d before merging), %d channels, %d relays",
        g.name,
        backend.value,
        len(subnets),
        len(raw),
        len(channels),
        len(dfg.relays()),
    )
    return dfg
