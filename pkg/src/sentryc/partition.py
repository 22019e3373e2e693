"""Distance indexing and sub-network extraction.

Distances are longest paths (in synapses) to a sink neuron inside the
residual graph; neurons that cannot reach the sink get ``LARGE`` so they are
never grouped with it.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Callable, Collection, Mapping, Sequence
from typing import Literal

from src.common.errors import CompileError
from src.graph.model import UNIT_WEIGHT, SdcnnGraph, Synapse
from src.sentryc.dfg import Relay, SubNetwork

log = logging.getLogger(__name__)

LARGE = 1 << 30


def longest_path_distances(
    g: SdcnnGraph, sink: int, live: Collection[int]
) -> dict[int, int]:
    """Longest-path distance of every live neuron to *sink* (``LARGE`` if none)."""
    if sink not in live:
        raise CompileError(f"sink neuron {sink} is not in the residual graph")
    rank = g.topology.rank
    ancestors = {sink}
    queue = deque([sink])
    while queue:
        n = queue.popleft()
        for p in g.predecessors(n):
            if p in live and p not in ancestors:
                ancestors.add(p)
                queue.append(p)
    dist = dict.fromkeys(live, LARGE)
    dist[sink] = 0
    for n in sorted(ancestors, key=rank.__getitem__, reverse=True):
        if n == sink:
            continue
        dist[n] = 1 + max(dist[s] for s in g.successors(n) if s in ancestors)
    return dist


def bounded_distances(
    g: SdcnnGraph, sink: int, is_live: Callable[[int], bool], limit: int
) -> dict[int, int]:
    """Exact longest-path distances for the neurons whose distance is at most *limit*.

    Only the backward neighbourhood within *limit* hops is visited, plus a
    forward reachability walk for successors that leave it.
    """
    rank = g.topology.rank
    sink_rank = rank[sink]
    near = {sink}
    frontier = [sink]
    for _ in range(limit):
        nxt = []
        for n in frontier:
            for p in g.predecessors(n):
                if p not in near and is_live(p):
                    near.add(p)
                    nxt.append(p)
        frontier = nxt

    reach: dict[int, bool] = {sink: True}

    def reaches(start: int) -> bool:
        stack = [(start, iter(g.successors(start)))]
        while stack:
            n, succ = stack[-1]
            if reach.get(n):
                stack.pop()
                if stack:
                    reach[stack[-1][0]] = True
                continue
            child = None
            for s in succ:
                if s in reach:
                    if reach[s]:
                        reach[n] = True
                        break
                elif is_live(s) and rank[s] < sink_rank:
                    child = s
                    break
            if reach.get(n):
                continue
            if child is None:
                reach[n] = False
                stack.pop()
            else:
                stack.append((child, iter(g.successors(child))))
        return reach[start]

    dist: dict[int, int] = {sink: 0}
    for n in sorted(near, key=rank.__getitem__, reverse=True):
        if n == sink:
            continue
        best = -1
        for s in g.successors(n):
            if s in dist:
                best = max(best, dist[s])
            elif s in near or reach.get(s) or (
                s not in reach and is_live(s) and rank[s] < sink_rank and reaches(s)
            ):
                best = limit  # s reaches the sink, but only over more than limit hops
            if best >= limit:
                break
        if 0 <= best < limit:
            dist[n] = best + 1
    return dist


def index_neurons(distances: Mapping[int, int]) -> list[int]:
    """Neurons ordered by (distance, id); equal distances form contiguous runs."""
    return sorted(distances, key=lambda n: (distances[n], n))


def create_subnet(
    g: SdcnnGraph, distances: Mapping[int, int], limit: int = 2, sid: int = 0
) -> SubNetwork:
    """Group the neurons within *limit* of the sink: l0 = distance 0, l1 = 1, l2 = 2."""
    layers: dict[int, list[int]] = {0: [], 1: [], 2: []}
    for n in index_neurons(distances):
        d = distances[n]
        if d <= limit:
            layers[d].append(n)
    members = {n for run in layers.values() for n in run}
    internal = tuple(
        sorted(
            (
                Synapse(src=p, dst=n, weight=g.weight(p, n))
                for n in members
                for p in g.predecessors(n)
                if p in members
            ),
            key=lambda x: x.pair,
        )
    )
    load = sum(len(g.predecessors(n)) for n in members)
    return SubNetwork(
        id=sid,
        l2=tuple(layers[2]),
        l1=tuple(layers[1]),
        l0=tuple(layers[0]),
        internal_synapses=internal,
        synapse_load=load,
    )


def insert_relays(
    s: SubNetwork,
    next_id: int,
    policy: Literal["always", "programmable"] = "always",
) -> tuple[SubNetwork, int]:
    """Replace every l2->l0 synapse with src->relay (unit) and relay->dst (original weight).

    The unit hop comes first so the relay fires once per source spike even for
    negative or sub-threshold weights. Relays join l1, one per skipped synapse.
    Returns the new sub-network and the next free neuron id. The
    ``programmable`` policy leaves skips on the core's l2->l0 block.
    """
    if policy == "programmable":
        return s, next_id
    l2, l0 = set(s.l2), set(s.l0)
    kept: list[Synapse] = []
    relays: list[Relay] = list(s.relays)
    for syn in s.internal_synapses:
        if syn.src in l2 and syn.dst in l0:
            r = Relay(id=next_id, src=syn.src, dst=syn.dst, weight=syn.weight)
            next_id += 1
            relays.append(r)
            kept.append(Synapse(src=syn.src, dst=r.id, weight=UNIT_WEIGHT))
            kept.append(Synapse(src=r.id, dst=syn.dst, weight=syn.weight))
        else:
            kept.append(syn)
    added = len(relays) - len(s.relays)
    if not added:
        return s, next_id
    log.debug("sub-network %d: %d relay(s) inserted", s.id, added)
    return (
        s.copy(
            update={
                "l1": s.l1 + tuple(r.id for r in relays[len(s.relays) :]),
                "internal_synapses": tuple(sorted(kept, key=lambda x: x.pair)),
                "relays": tuple(relays),
                "synapse_load": s.synapse_load + added,
            }
        ),
        next_id,
    )


def insert_ports(
    s: SubNetwork,
    inbound: Sequence[Synapse],
    next_id: int,
    policy: Literal["always", "programmable"] = "always",
) -> tuple[SubNetwork, list[Synapse], int]:
    """Bring the synapses entering *s* in through its l2 layer.

    A synapse landing on l2 stays a channel synapse. Any other gets routed
    over a port relay in l2, one per source neuron, and for l0 targets over a
    second port in l1 (the ``programmable`` policy uses the l2->l0 block
    instead). Hops into ports have unit weight; the last hop keeps the
    original weight. Returns the sub-network, its channel synapses and the
    next free neuron id. The synapse load becomes every synapse ending in *s*.
    """
    l2, l0 = set(s.l2), set(s.l0)
    upper: dict[int, int] = {}
    lower: dict[int, int] = {}
    relays = list(s.relays)
    internal = list(s.internal_synapses)
    channel: list[Synapse] = []
    for syn in sorted(inbound, key=lambda x: x.pair):
        if syn.dst in l2:
            channel.append(syn)
            continue
        port = upper.get(syn.src)
        if port is None:
            port = upper[syn.src] = next_id
            next_id += 1
            relays.append(Relay(id=port, src=syn.src, role="port"))
            channel.append(Synapse(src=syn.src, dst=port, weight=UNIT_WEIGHT))
        if syn.dst in l0 and policy == "always":
            hop = lower.get(syn.src)
            if hop is None:
                hop = lower[syn.src] = next_id
                next_id += 1
                relays.append(Relay(id=hop, src=syn.src, role="port"))
                internal.append(Synapse(src=port, dst=hop, weight=UNIT_WEIGHT))
            port = hop
        internal.append(Synapse(src=port, dst=syn.dst, weight=syn.weight))
    if upper:
        log.debug("sub-network %d: %d port relay(s)", s.id, len(upper) + len(lower))
    out = s.copy(
        update={
            "l2": s.l2 + tuple(upper.values()),
            "l1": s.l1 + tuple(lower.values()),
            "internal_synapses": tuple(sorted(internal, key=lambda x: x.pair)),
            "relays": tuple(relays),
            "synapse_load": len(internal) + len(channel),
        }
    )
    return out, channel, next_id
