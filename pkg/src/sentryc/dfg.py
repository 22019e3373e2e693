"""Compiler output: sub-networks, channels and the dataflow graph over them."""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from itertools import chain
from typing import Literal

import networkx as nx
from pydantic import BaseModel, Field, PrivateAttr

from src.common.errors import CompileError
from src.graph.model import UNIT_WEIGHT, Neuron, NeuronKind, SdcnnGraph, Synapse
from src.hw.cores import Backend, CoreConfig, LayerSizes

log = logging.getLogger(__name__)

Pair = tuple[int, int]


class Relay(BaseModel):
    """Threshold-1 pass-through neuron forwarding the spikes of neuron ``src``.

    A ``skip`` relay sits in l1 and stands in for the l2->l0 synapse
    ``src -> dst`` of that weight. A ``port`` relay brings ``src``'s spikes
    into a sub-network through its input layer; ``dst`` is unset because one
    port may feed several neurons.
    """

    id: int
    src: int
    dst: int | None = None
    weight: int = UNIT_WEIGHT
    role: Literal["skip", "port"] = "skip"

    class Config:
        frozen = True


class SubNetwork(BaseModel):
    id: int
    l2: tuple[int, ...] = ()
    l1: tuple[int, ...] = ()
    l0: tuple[int, ...] = ()
    internal_synapses: tuple[Synapse, ...] = ()
    relays: tuple[Relay, ...] = ()
    synapse_load: int = 0
    assigned_config: CoreConfig | None = None

    class Config:
        frozen = True

    @property
    def relay_neurons(self) -> tuple[int, ...]:
        return tuple(r.id for r in self.relays)

    @property
    def neurons(self) -> tuple[int, ...]:
        return self.l2 + self.l1 + self.l0

    @property
    def original_neurons(self) -> tuple[int, ...]:
        relays = set(self.relay_neurons)
        return tuple(n for n in self.neurons if n not in relays)

    @property
    def sizes(self) -> LayerSizes:
        return LayerSizes(
            l2=len(self.l2), l1=len(self.l1), l0=len(self.l0), synapses=self.synapse_load
        )

    @property
    def config_name(self) -> str | None:
        return self.assigned_config.name if self.assigned_config else None

    def layer_of(self, nid: int) -> int:
        if nid in self.l0:
            return 0
        if nid in self.l1:
            return 1
        if nid in self.l2:
            return 2
        raise KeyError(nid)


class Channel(BaseModel):
    id: int
    src_subnet: int
    dst_subnet: int
    synapses: tuple[Synapse, ...]
    profiled_spike_count: int = 0

    class Config:
        frozen = True

    @property
    def source_neurons(self) -> tuple[int, ...]:
        return tuple(sorted({s.src for s in self.synapses}))


class DataflowGraph(BaseModel):
    name: str
    backend: Backend = Backend.MUBRAIN
    relay_policy: Literal["always", "programmable"] = "always"
    graph_hash: str = ""
    neurons: tuple[Neuron, ...]
    subnets: tuple[SubNetwork, ...]
    channels: tuple[Channel, ...] = ()
    exec_times: tuple[int, ...] = ()
    profiled_images: int = Field(0, ge=0)

    _index: dict[int, int] | None = PrivateAttr(default=None)

    class Config:
        frozen = True

    # ------------------------------------------------------------------ #
    # lookups                                                             #
    # ------------------------------------------------------------------ #
    def subnet_of(self, nid: int) -> int:
        if self._index is None:
            self._index = {n: s.id for s in self.subnets for n in s.neurons}
        return self._index[nid]

    def subnet(self, sid: int) -> SubNetwork:
        return self.subnets[sid]

    @property
    def profiled(self) -> bool:
        return len(self.exec_times) == len(self.subnets)

    def to_networkx(self) -> nx.DiGraph:
        dag = nx.DiGraph()
        dag.add_nodes_from(s.id for s in self.subnets)
        dag.add_edges_from((c.src_subnet, c.dst_subnet) for c in self.channels)
        return dag

    def predecessors(self, sid: int) -> list[int]:
        return sorted({c.src_subnet for c in self.channels if c.dst_subnet == sid})

    def successors(self, sid: int) -> list[int]:
        return sorted({c.dst_subnet for c in self.channels if c.src_subnet == sid})

    def topological_order(self) -> list[int]:
        return list(nx.lexicographical_topological_sort(self.to_networkx()))

    def relays(self) -> list[Relay]:
        return [r for s in self.subnets for r in s.relays]

    def input_layer(self, sid: int) -> tuple[int, ...] | None:
        """Neurons of *sid* that may receive channel spikes; None means any neuron.

        Three-layer µBrain cores take external spikes on l2 only. Two-layer
        crossbar cores have no l2 and feed every column from their input rows.
        """
        if self.backend is Backend.MUBRAIN:
            return self.subnets[sid].l2
        return None

    def mapped_graph(self) -> SdcnnGraph:
        """The network the cores actually run: original neurons plus relays."""
        neurons = list(self.neurons)
        neurons.extend(
            Neuron(id=r.id, kind=NeuronKind.RELAY, threshold=UNIT_WEIGHT) for r in self.relays()
        )
        synapses = [syn for s in self.subnets for syn in s.internal_synapses]
        synapses.extend(syn for c in self.channels for syn in c.synapses)
        bits = max(2, max((abs(s.weight) for s in synapses), default=1).bit_length() + 1)
        return SdcnnGraph(name=self.name, weight_bits=bits, neurons=neurons, synapses=synapses)

    def with_profile(self, channels: list[Channel], exec_times: list[int], images: int):
        return self.copy(
            update={
                "channels": tuple(channels),
                "exec_times": tuple(exec_times),
                "profiled_images": images,
            }
        )


def _end_to_end(dfg: DataflowGraph) -> tuple[Counter[Pair], dict[Pair, int]]:
    """Neuron-to-neuron synapses seen through relay chains, with the last hop's weight."""
    relays = {r.id: r for r in dfg.relays()}
    out: dict[int, list[Synapse]] = defaultdict(list)
    fan_in: Counter[int] = Counter()
    internal = (x for s in dfg.subnets for x in s.internal_synapses)
    crossing = (x for c in dfg.channels for x in c.synapses)
    for syn in chain(internal, crossing):
        out[syn.src].append(syn)
        fan_in[syn.dst] += 1
    for r in relays.values():
        if fan_in[r.id] != 1:
            raise CompileError(f"relay {r.id} has {fan_in[r.id]} inputs, expected 1")
        if r.role == "skip" and [(x.dst, x.weight) for x in out[r.id]] != [(r.dst, r.weight)]:
            raise CompileError(f"relay {r.id} is not wired {r.src}->{r.id}->{r.dst}")

    seen: Counter[Pair] = Counter()
    weights: dict[Pair, int] = {}
    visited: set[int] = set()
    for n in dfg.neurons:
        stack = [n.id]
        while stack:
            for syn in out[stack.pop()]:
                r = relays.get(syn.dst)
                if r is None:
                    seen[(n.id, syn.dst)] += 1
                    weights[(n.id, syn.dst)] = syn.weight
                    continue
                if r.src != n.id or syn.weight != UNIT_WEIGHT:
                    raise CompileError(f"relay {r.id} is not a unit-weight hop from {r.src}")
                visited.add(r.id)
                stack.append(r.id)
    stray = sorted(set(relays) - visited)
    if stray:
        raise CompileError(f"relay {stray[0]} is not fed by its source neuron")
    return seen, weights


def check_dataflow_graph(dfg: DataflowGraph, g: SdcnnGraph | None = None) -> None:
    """Raise CompileError on the first broken DFG invariant.

    Checks partition, layer legality of internal and channel synapses, config
    fit, acyclicity and, with *g*, that every input synapse survives exactly
    once with its end-to-end weight.
    """
    originals = [n for s in dfg.subnets for n in s.original_neurons]
    dup = [n for n, k in Counter(originals).items() if k > 1]
    if dup:
        raise CompileError(f"neuron {dup[0]} placed in more than one sub-network")
    expected = {n.id for n in dfg.neurons}
    if set(originals) != expected:
        missing = sorted(expected - set(originals))
        raise CompileError(f"neuron {missing[0] if missing else '?'} not placed")

    allowed = {(2, 1), (1, 0)}
    if dfg.relay_policy == "programmable":
        allowed.add((2, 0))
    for s in dfg.subnets:
        for layer in (s.l2, s.l1, s.l0):
            if len(set(layer)) != len(layer):
                raise CompileError(f"sub-network {s.id} repeats a neuron within a layer")
        if len(set(s.l2) | set(s.l1) | set(s.l0)) != len(s.neurons):
            raise CompileError(f"sub-network {s.id} has overlapping layers")
        for syn in s.internal_synapses:
            try:
                step = (s.layer_of(syn.src), s.layer_of(syn.dst))
            except KeyError as exc:
                raise CompileError(
                    f"sub-network {s.id}: synapse {syn.src}->{syn.dst} leaves the sub-network"
                ) from exc
            if step not in allowed:
                raise CompileError(
                    f"sub-network {s.id}: synapse {syn.src}->{syn.dst} connects layer "
                    f"l{step[0]} to l{step[1]}"
                )
        if s.assigned_config is None or not s.assigned_config.fits(s.sizes):
            raise CompileError(f"sub-network {s.id} does not fit its assigned core")

    for c in dfg.channels:
        if c.src_subnet == c.dst_subnet:
            raise CompileError(f"channel {c.id} loops on sub-network {c.src_subnet}")
        outputs = set(dfg.subnet(c.src_subnet).l0)
        inputs = dfg.input_layer(c.dst_subnet)
        for syn in c.synapses:
            if dfg.subnet_of(syn.src) != c.src_subnet or dfg.subnet_of(syn.dst) != c.dst_subnet:
                raise CompileError(f"channel {c.id}: synapse {syn.src}->{syn.dst} misrouted")
            if syn.src not in outputs:
                raise CompileError(
                    f"channel {c.id}: synapse {syn.src}->{syn.dst} does not leave from l0 "
                    f"of sub-network {c.src_subnet}"
                )
            if inputs is not None and syn.dst not in inputs:
                raise CompileError(
                    f"channel {c.id}: synapse {syn.src}->{syn.dst} does not enter l2 "
                    f"of sub-network {c.dst_subnet}"
                )
    if not nx.is_directed_acyclic_graph(dfg.to_networkx()):
        raise CompileError("sub-network graph has a cycle")

    if g is None:
        return
    seen, weights = _end_to_end(dfg)
    for syn in g.synapses:
        if seen[syn.pair] != 1:
            raise CompileError(
                f"synapse {syn.src}->{syn.dst} appears {seen[syn.pair]} times in the DFG"
            )
        if weights[syn.pair] != syn.weight:
            raise CompileError(f"synapse {syn.src}->{syn.dst} changed weight")
    if sum(seen.values()) != len(g.synapses):
        raise CompileError("DFG carries synapses that are not in the input graph")
