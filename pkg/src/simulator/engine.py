"""Event queue shared by direct and mapped simulation.

Events are ordered by ``(time, target neuron, origin neuron, sequence)``.
Relay neurons are transparent: a spike fires every relay on its way and
reaches the next non-relay neuron as if sent by its original source, so a
mapped network replays the event order of the network it came from. Relays
given another kind run as ordinary threshold neurons.
"""

from __future__ import annotations

import heapq
import logging
from collections import Counter
from dataclasses import dataclass, field

from src.common.config import SimulatorConfig
from src.graph.model import NeuronKind, SdcnnGraph
from src.graph.stimulus import Stimulus
from src.simulator.neuron import NeuronState

log = logging.getLogger(__name__)

INJECTED = -1


@dataclass
class SpikeTrace:
    """Spike counts per image plus the delivery tally used for conservation checks."""

    per_image: list[Counter] = field(default_factory=list)
    delivered: int = 0
    last_spike: list[int] = field(default_factory=list)

    @property
    def totals(self) -> Counter:
        out: Counter = Counter()
        for c in self.per_image:
            out.update(c)
        return out

    @property
    def total_spikes(self) -> int:
        return sum(sum(c.values()) for c in self.per_image)


def run_events(g: SdcnnGraph, stimulus: Stimulus, cfg: SimulatorConfig) -> SpikeTrace:
    relays = {n.id for n in g.neurons if n.kind is NeuronKind.RELAY}
    delay = cfg.neuron_delay_ps
    trace = SpikeTrace()
    for image in stimulus.images:
        counts: Counter = Counter()
        states: dict[int, NeuronState] = {}
        queue: list[tuple[int, int, int, int, int]] = []
        seq = 0
        last = 0

        def emit(src: int, t: int) -> None:
            nonlocal seq
            counts[src] += 1
            stack = [src]
            while stack:
                n = stack.pop()
                for dst in g.successors(n):
                    if dst in relays:
                        counts[dst] += 1
                        trace.delivered += 1
                        stack.append(dst)
                    else:
                        heapq.heappush(queue, (t + delay, dst, src, seq, g.weight(n, dst)))
                        seq += 1

        for nid, times in image.items():
            for t in times:
                heapq.heappush(queue, (t, nid, INJECTED, seq, 0))
                seq += 1
        while queue:
            t, target, origin, _, weight = heapq.heappop(queue)
            last = t
            if origin == INJECTED:
                emit(target, t)
                continue
            trace.delivered += 1
            state = states.get(target)
            if state is None:
                state = states[target] = NeuronState(threshold=g.neuron(target).threshold)
            if state.integrate(weight, t, cfg):
                emit(target, t)
        trace.per_image.append(counts)
        trace.last_spike.append(last)
    log.debug("simulated %d image(s) of %s: %d spikes", len(stimulus), g.name, trace.total_spikes)
    return trace


def conservation_holds(g: SdcnnGraph, trace: SpikeTrace) -> bool:
    """Every emitted spike reached all of its fan-out destinations."""
    totals = trace.totals
    expected = sum(totals[n] * len(g.successors(n)) for n in totals)
    return expected == trace.delivered
