"""SDCNN inference graph data model.

Neurons and synapses are frozen pydantic models; :class:`SdcnnGraph` keeps them
in canonical order (neurons by id, synapses by ``(src, dst)``) so two graphs with
the same content compare equal and serialise identically. The index of a
synapse in that order is its synapse id.
"""

from __future__ import annotations

from collections.abc import Iterable
from enum import Enum
from typing import Any

import networkx as nx
from pydantic import BaseModel, Field, PrivateAttr, root_validator, validator

DEFAULT_WEIGHT_BITS = 2
UNIT_WEIGHT = 1


class NeuronKind(str, Enum):
    INPUT = "input"
    HIDDEN = "hidden"
    OUTPUT = "output"
    RELAY = "relay"


class ResetMode(str, Enum):
    TO_ZERO = "to_zero"


class Neuron(BaseModel):
    id: int = Field(..., ge=0)
    kind: NeuronKind = NeuronKind.HIDDEN
    threshold: int = Field(64, ge=1)
    reset_mode: ResetMode = ResetMode.TO_ZERO

    class Config:
        frozen = True


class Synapse(BaseModel):
    src: int = Field(..., ge=0)
    dst: int = Field(..., ge=0)
    weight: int

    class Config:
        frozen = True

    @property
    def pair(self) -> tuple[int, int]:
        return self.src, self.dst


def weight_range(bits: int) -> tuple[int, int]:
    """Two's-complement range of a signed weight stored in *bits* bits."""
    return -(1 << (bits - 1)), (1 << (bits - 1)) - 1


class _Topology:
    """Adjacency derived once from an immutable graph."""

    def __init__(self, neurons: Iterable[Neuron], synapses: Iterable[Synapse]) -> None:
        self.by_id: dict[int, Neuron] = {n.id: n for n in neurons}
        self.pred: dict[int, list[int]] = {nid: [] for nid in self.by_id}
        self.succ: dict[int, list[int]] = {nid: [] for nid in self.by_id}
        self.weight: dict[tuple[int, int], int] = {}
        for s in synapses:
            self.succ[s.src].append(s.dst)
            self.pred[s.dst].append(s.src)
            self.weight[s.pair] = s.weight
        self.digraph = nx.DiGraph()
        self.digraph.add_nodes_from(self.by_id)
        self.digraph.add_edges_from(self.weight)
        self.order: list[int] = list(nx.lexicographical_topological_sort(self.digraph))
        self.rank: dict[int, int] = {nid: i for i, nid in enumerate(self.order)}


class SdcnnGraph(BaseModel):
    """Directed acyclic spiking-neuron graph, the compiler's input."""

    name: str = "sdcnn"
    weight_bits: int = Field(DEFAULT_WEIGHT_BITS, ge=2, le=16)
    neurons: tuple[Neuron, ...]
    synapses: tuple[Synapse, ...] = ()

    _topology: _Topology | None = PrivateAttr(default=None)

    class Config:
        frozen = True

    @validator("neurons")
    def _sort_neurons(cls, v: tuple[Neuron, ...]) -> tuple[Neuron, ...]:
        return tuple(sorted(v, key=lambda n: n.id))

    @validator("synapses")
    def _sort_synapses(cls, v: tuple[Synapse, ...]) -> tuple[Synapse, ...]:
        return tuple(sorted(v, key=lambda s: s.pair))

    @root_validator(skip_on_failure=True)
    def _check_structure(cls, values: dict[str, Any]) -> dict[str, Any]:
        neurons: tuple[Neuron, ...] = values["neurons"]
        synapses: tuple[Synapse, ...] = values["synapses"]
        if not neurons:
            raise ValueError("graph has no neurons")
        ids = [n.id for n in neurons]
        for a, b in zip(ids, ids[1:]):
            if a == b:
                raise ValueError(f"duplicate neuron id {a}")
        known = set(ids)
        lo, hi = weight_range(values["weight_bits"])
        for a, b in zip(synapses, synapses[1:]):
            if a.pair == b.pair:
                raise ValueError(f"duplicate synapse {a.src}->{a.dst}")
        for s in synapses:
            if s.src == s.dst:
                raise ValueError(f"self-loop on neuron {s.src}")
            if s.src not in known or s.dst not in known:
                raise ValueError(f"dangling synapse {s.src}->{s.dst}")
            if not lo <= s.weight <= hi:
                raise ValueError(
                    f"weight out of range on synapse {s.src}->{s.dst}: "
                    f"{s.weight} not in [{lo}, {hi}]"
                )
        g = nx.DiGraph()
        g.add_nodes_from(known)
        g.add_edges_from(s.pair for s in synapses)
        if not nx.is_directed_acyclic_graph(g):
            cycle = [u for u, _ in nx.find_cycle(g)]
            raise ValueError(f"cycle through neurons {cycle}")
        return values

    # ------------------------------------------------------------------ #
    # derived views                                                       #
    # ------------------------------------------------------------------ #
    @property
    def topology(self) -> _Topology:
        if self._topology is None:
            self._topology = _Topology(self.neurons, self.synapses)
        return self._topology

    def neuron(self, nid: int) -> Neuron:
        return self.topology.by_id[nid]

    def has_neuron(self, nid: int) -> bool:
        return nid in self.topology.by_id

    def predecessors(self, nid: int) -> list[int]:
        return self.topology.pred[nid]

    def successors(self, nid: int) -> list[int]:
        return self.topology.succ[nid]

    def weight(self, src: int, dst: int) -> int:
        return self.topology.weight[(src, dst)]

    def topological_order(self) -> list[int]:
        """Neuron ids in topological order, smallest id first among ready neurons."""
        return self.topology.order

    def inputs(self) -> list[int]:
        return [n.id for n in self.neurons if not self.topology.pred[n.id]]

    def outputs(self) -> list[int]:
        return [n.id for n in self.neurons if not self.topology.succ[n.id]]

    def to_networkx(self) -> nx.DiGraph:
        return self.topology.digraph.copy()

    @property
    def ids(self) -> list[int]:
        return [n.id for n in self.neurons]
