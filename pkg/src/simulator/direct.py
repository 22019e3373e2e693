from __future__ import annotations

import logging

from pydantic import BaseModel

from src.common.config import SimulatorConfig
from src.common.diagnostics import validate_io
from src.graph.io import check_stimulus
from src.graph.model import SdcnnGraph
from src.graph.stimulus import Stimulus
from src.simulator.engine import SpikeTrace, run_events

log = logging.getLogger(__name__)


class DirectResult(BaseModel):
    output_spikes: dict[int, int]
    neuron_spikes: dict[int, int]
    total_spikes: int

    class Config:
        frozen = True


@validate_io
def simulate_direct(
    g: SdcnnGraph, stimulus: Stimulus, cfg: SimulatorConfig | None = None
) -> DirectResult:
    """Event-driven run of the uncompiled graph; the compiler's functional reference."""
    check_stimulus(stimulus, g)
    trace = trace_direct(g, stimulus, cfg)
    totals = trace.totals
    return DirectResult(
        output_spikes={n: totals[n] for n in g.outputs()},
        neuron_spikes={n: totals[n] for n in g.ids if totals[n]},
        total_spikes=trace.total_spikes,
    )


def trace_direct(
    g: SdcnnGraph, stimulus: Stimulus, cfg: SimulatorConfig | None = None
) -> SpikeTrace:
    return run_events(g, stimulus, cfg or SimulatorConfig())
