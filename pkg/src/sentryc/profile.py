"""Channel profiling: spike traffic and per-core busy time from a training batch."""

from __future__ import annotations

import logging
import math
from collections import Counter

from src.common.config import SimulatorConfig
from src.common.diagnostics import validate_io
from src.common.errors import InconsistentArtifactError
from src.graph.io import check_stimulus
from src.graph.model import SdcnnGraph
from src.graph.stimulus import Stimulus
from src.hw.config import TimingConfig
from src.sentryc.compiler import graph_hash
from src.sentryc.dfg import Channel, DataflowGraph
from src.simulator.engine import run_events

log = logging.getLogger(__name__)


def exec_time(processed: int, images: int, timing: TimingConfig) -> int:
    """Busy time (ps) of one core for one image: alpha per spike handled plus beta."""
    per_image = math.ceil(processed / max(images, 1))
    return timing.alpha_ps_per_spike * per_image + timing.beta_ps


def channel_counts(dfg: DataflowGraph, spikes: Counter) -> list[int]:
    """Spikes leaving each channel's source neurons; one bus packet per emission."""
    return [sum(spikes[n] for n in c.source_neurons) for c in dfg.channels]


def processed_spikes(dfg: DataflowGraph, spikes: Counter, counts: list[int]) -> list[int]:
    inbound = Counter()
    for c, k in zip(dfg.channels, counts):
        inbound[c.dst_subnet] += k
    out = []
    for s in dfg.subnets:
        own = sum(spikes[n] for n in s.original_neurons)
        relayed = sum(spikes[r.src] for r in s.relays)
        out.append(own + relayed + inbound[s.id])
    return out


@validate_io
def profile_channels(
    dfg: DataflowGraph,
    g: SdcnnGraph,
    stimulus: Stimulus,
    timing: TimingConfig | None = None,
    sim: SimulatorConfig | None = None,
) -> DataflowGraph:
    """Fill channel spike counts and execution times from a run of the uncompiled graph."""
    if dfg.graph_hash and dfg.graph_hash != graph_hash(g):
        raise InconsistentArtifactError(
            f"inconsistent artifact versions: dataflow graph {dfg.name} was not compiled from "
            f"graph {g.name}"
        )
    check_stimulus(stimulus, g)
    timing = timing or TimingConfig()
    trace = run_events(g, stimulus, sim or SimulatorConfig())
    spikes = trace.totals
    counts = channel_counts(dfg, spikes)
    channels = [
        c.copy(update={"profiled_spike_count": k}) for c, k in zip(dfg.channels, counts)
    ]
    images = len(stimulus)
    times = [exec_time(p, images, timing) for p in processed_spikes(dfg, spikes, counts)]
    log.info(
        "profiled %s over %d image(s): %d spikes, %d on channels",
        dfg.name,
        images,
        trace.total_spikes,
        sum(counts),
    )
    return dfg.with_profile(channels, times, images)
