"""Simulation of a compiled application on its cores and interconnect.

Spikes are replayed on the mapped network (original neurons plus relays);
the per-image busy time of every core then drives a self-timed execution in
which every channel adds its per-spike transfer latency. Energies are kept
in integer femtojoules.
"""

from __future__ import annotations

import logging

from pydantic import BaseModel

from src.common.config import SimulatorConfig
from src.common.diagnostics import validate_io
from src.common.errors import InconsistentArtifactError
from src.graph.stimulus import Stimulus
from src.hw.config import HardwareConfig
from src.hw.cost import spike_energy, static_power
from src.hw.platform import HardwarePlatform
from src.sentryc.dfg import DataflowGraph
from src.sentryc.io import dfg_hash
from src.sentryc.profile import channel_counts, exec_time, processed_spikes
from src.segbus.cost import NocDescriptor, per_spike
from src.segbus.planner import BusProgram
from src.sentryrt.schedule import Schedule
from src.simulator.engine import conservation_holds, run_events

log = logging.getLogger(__name__)

FJ_PER_PJ = 1000
UW_PS_PER_FJ = 1000  # 1 uW over 1 ps is 1e-3 fJ


class CoreReport(BaseModel):
    core: int
    config: str
    spikes: int
    static_fj: int
    dynamic_fj: int

    class Config:
        frozen = True

    @property
    def total_fj(self) -> int:
        return self.static_fj + self.dynamic_fj


class SimReport(BaseModel):
    """Outcome of one mapped run.

    ``total_spikes`` counts the input graph's neurons and ``relay_spikes``
    the relays the compiler added; core dynamic energy charges both.
    """

    name: str
    interconnect: str
    images: int
    cores: tuple[CoreReport, ...]
    interconnect_fj: int
    latencies_ps: tuple[int, ...]
    makespan_ps: int
    channel_spikes: dict[int, int]
    output_spikes: dict[int, int]
    total_spikes: int
    relay_spikes: int = 0
    spikes_conserved: bool

    class Config:
        frozen = True

    @property
    def static_fj(self) -> int:
        return sum(c.static_fj for c in self.cores)

    @property
    def dynamic_fj(self) -> int:
        return sum(c.dynamic_fj for c in self.cores)

    @property
    def core_fj(self) -> int:
        return self.static_fj + self.dynamic_fj

    @property
    def total_fj(self) -> int:
        return self.core_fj + self.interconnect_fj

    @property
    def total_pj(self) -> float:
        return self.total_fj / FJ_PER_PJ

    @property
    def mean_latency_ps(self) -> float:
        return sum(self.latencies_ps) / len(self.latencies_ps) if self.latencies_ps else 0.0

    @property
    def throughput(self) -> float:
        """Images per ps."""
        return self.images / self.makespan_ps if self.makespan_ps else 0.0

    def summary(self) -> dict[str, float | int | str]:
        return {
            "name": self.name,
            "interconnect": self.interconnect,
            "images": self.images,
            "cores": len(self.cores),
            "total_spikes": self.total_spikes,
            "relay_spikes": self.relay_spikes,
            "static_pj": self.static_fj / FJ_PER_PJ,
            "dynamic_pj": self.dynamic_fj / FJ_PER_PJ,
            "interconnect_pj": self.interconnect_fj / FJ_PER_PJ,
            "total_pj": self.total_pj,
            "makespan_ps": self.makespan_ps,
            "mean_latency_ps": self.mean_latency_ps,
            "throughput_per_us": self.throughput * 1e6,
        }


def _check_versions(
    dfg: DataflowGraph,
    platform: HardwarePlatform,
    fabric: BusProgram | NocDescriptor,
    schedule: Schedule,
) -> str:
    digest = dfg_hash(dfg)
    for what, recorded in (("schedule", schedule.dfg_hash), ("interconnect", fabric.dfg_hash)):
        if recorded and recorded != digest:
            log.error("%s was built for dataflow graph %s, got %s", what, recorded, digest)
            raise InconsistentArtifactError(
                f"inconsistent artifact versions: {what} does not match dataflow graph {dfg.name}"
            )
    ids = sorted(cid for cid, _ in platform.cores)
    if ids != [s.id for s in dfg.subnets] or sorted(schedule.pipelines) != ids:
        raise InconsistentArtifactError(
            "inconsistent artifact versions: cores, schedule and sub-networks differ"
        )
    routed = set(fabric.placement)
    if routed != set(ids):
        raise InconsistentArtifactError(
            "inconsistent artifact versions: interconnect places a different set of cores"
        )
    return digest


def _batch(stimulus: Stimulus, images: int | None) -> Stimulus:
    if images is None or not stimulus.images:
        return stimulus
    return Stimulus(images=tuple(stimulus.images[b % len(stimulus)] for b in range(images)))


def _self_timed(
    dfg: DataflowGraph,
    busy: list[list[int]],
    latency: dict[int, int],
    overlap: bool,
) -> tuple[list[int], int]:
    """Per-image latency and makespan with channel transfer delays."""
    order = dfg.topological_order()
    inbound: dict[int, list[tuple[int, int]]] = {s.id: [] for s in dfg.subnets}
    for c in dfg.channels:
        inbound[c.dst_subnet].append((c.src_subnet, latency.get(c.id, 0)))
    prev_end = dict.fromkeys(inbound, 0)
    barrier = 0
    latencies = []
    makespan = 0
    for times in busy:
        end: dict[int, int] = {}
        first = None
        for sid in order:
            ready = max([prev_end[sid], barrier] + [end[p] + lat for p, lat in inbound[sid]])
            first = ready if first is None else min(first, ready)
            end[sid] = ready + times[sid]
        last = max(end.values(), default=0)
        latencies.append(last - (first or 0))
        makespan = max(makespan, last)
        prev_end = end
        if not overlap:
            barrier = last
    return latencies, makespan


@validate_io
def simulate_mapped(
    dfg: DataflowGraph,
    platform: HardwarePlatform,
    fabric: BusProgram | NocDescriptor,
    schedule: Schedule,
    stimulus: Stimulus,
    images: int | None = None,
    *,
    hw: HardwareConfig | None = None,
    sim: SimulatorConfig | None = None,
) -> SimReport:
    """Run *images* (default: every stimulus image) through the compiled application."""
    _check_versions(dfg, platform, fabric, schedule)
    hw = hw or HardwareConfig()
    sim = sim or SimulatorConfig()
    batch = _batch(stimulus, images)
    mapped = dfg.mapped_graph()
    trace = run_events(mapped, batch, sim)
    totals = trace.totals
    conserved = conservation_holds(mapped, trace)
    if not conserved:
        log.error("spike conservation broken on %s", dfg.name)

    busy = []
    for counts in trace.per_image:
        per_channel = channel_counts(dfg, counts)
        busy.append(
            [exec_time(p, 1, hw.timing) for p in processed_spikes(dfg, counts, per_channel)]
        )
    energy_pj, latency_ps = per_spike(fabric, hw.interconnect)
    latencies, makespan = _self_timed(dfg, busy, latency_ps, schedule.overlap)

    m = hw.cost_model
    cores = []
    for cid, cfg in platform.cores:
        s = dfg.subnet(cid)
        spikes = sum(totals[n] for n in s.neurons)
        cores.append(
            CoreReport(
                core=cid,
                config=cfg.name,
                spikes=spikes,
                static_fj=round(static_power(cfg, m) * makespan / UW_PS_PER_FJ),
                dynamic_fj=spikes * round(spike_energy(cfg, m) * FJ_PER_PJ),
            )
        )
    traffic = dict(zip((c.id for c in dfg.channels), channel_counts(dfg, totals)))
    interconnect_fj = sum(
        k * round(energy_pj.get(cid, 0.0) * FJ_PER_PJ) for cid, k in sorted(traffic.items())
    )
    outputs = [n.id for n in dfg.neurons if not mapped.successors(n.id)]
    report = SimReport(
        name=dfg.name,
        interconnect="segbus" if isinstance(fabric, BusProgram) else "noc",
        images=len(batch),
        cores=tuple(cores),
        interconnect_fj=interconnect_fj,
        latencies_ps=tuple(latencies),
        makespan_ps=makespan,
        channel_spikes=traffic,
        output_spikes={n: totals[n] for n in outputs},
        total_spikes=sum(totals[n.id] for n in dfg.neurons),
        relay_spikes=sum(totals[r.id] for r in dfg.relays()),
        spikes_conserved=conserved,
    )
    log.info(
        "simulated %s on %d core(s) over %s: %.1f pJ, makespan %d ps",
        dfg.name,
        len(cores),
        report.interconnect,
        report.total_pj,
        makespan,
    )
    return report
