import pytest

from conftest import random_dag
from src.common.errors import InconsistentArtifactError
from src.graph.stimulus import Stimulus, make_stimulus
from src.hw.platform import build_platform
from src.segbus.cost import build_noc
from src.segbus.planner import plan_lanes, program_switches
from src.segbus.topology import place_cores
from src.sentryc.compiler import compile_graph
from src.sentryc.io import dfg_hash
from src.sentryc.profile import profile_channels
from src.sentryrt.pipelines import allocate_pipelines
from src.sentryrt.schedule import channel_activity, schedule_batch
from src.simulator.direct import simulate_direct
from src.simulator.mapped import simulate_mapped

ONE_SPIKE = Stimulus(images=({0: (0,)},))


def _deploy(g, hw, stimulus, interconnect="segbus", *, batch=1, overlap=True):
    palette = hw.palette("four")
    dfg = profile_channels(compile_graph(g, palette, hw.cost_model), g, stimulus, hw.timing)
    digest = dfg_hash(dfg)
    pipelines = allocate_pipelines(dfg, len(dfg.subnets))
    schedule = schedule_batch(dfg, pipelines, batch, overlap=overlap, dfg_hash=digest)
    placement = place_cores(dfg)
    if interconnect == "noc":
        fabric = build_noc(dfg, placement, hw.interconnect.noc, dfg_hash=digest)
    else:
        activity = channel_activity(dfg, schedule)
        plan = plan_lanes(dfg, placement, activity)
        fabric = program_switches(dfg, placement, plan, activity, dfg_hash=digest)
    return dfg, build_platform(dfg, palette, interconnect), fabric, schedule


def _run(g, hw, stimulus, interconnect="segbus", images=None, **kw):
    dfg, platform, fabric, schedule = _deploy(g, hw, stimulus, interconnect, **kw)
    return simulate_mapped(dfg, platform, fabric, schedule, stimulus, images, hw=hw)


def test_chain_on_segmented_bus(chain7, hw):
    report = _run(chain7, hw, ONE_SPIKE)
    assert report.interconnect == "segbus"
    assert report.makespan_ps == 6190
    assert report.latencies_ps == (6190,)
    assert report.interconnect_fj == 200
    assert report.dynamic_fj == 7 * 26_000
    assert [c.spikes for c in report.cores] == [1, 3, 3]
    assert all(c.config == "little-1" for c in report.cores)
    assert [c.static_fj for c in report.cores] == [249, 249, 249]
    assert report.channel_spikes == {0: 1, 1: 1}
    assert report.relay_spikes == 0
    assert report.spikes_conserved


def test_chain_on_mesh(chain7, hw):
    report = _run(chain7, hw, ONE_SPIKE, "noc")
    assert report.interconnect == "noc"
    assert report.makespan_ps == 7890
    assert report.interconnect_fj == 6000
    assert report.dynamic_fj == 7 * 26_000


def test_interconnect_does_not_change_spikes(fig7a, hw):
    stimulus = make_stimulus(fig7a, 3, 2, 4_000, seed=2)
    sb = _run(fig7a, hw, stimulus)
    noc = _run(fig7a, hw, stimulus, "noc")
    assert sb.output_spikes == noc.output_spikes
    assert sb.total_spikes == noc.total_spikes
    assert sb.channel_spikes == noc.channel_spikes
    assert sb.total_fj < noc.total_fj


def test_relay_spikes_are_counted_apart(fig7a, hw):
    report = _run(fig7a, hw, Stimulus(images=({0: (0, 100)},)))
    # per input spike: 0..6 fire once, 7 twice, and each of the 7 port relays once
    assert report.total_spikes == 18
    assert report.relay_spikes == 14
    assert sum(c.spikes for c in report.cores) == 32
    assert report.spikes_conserved


def test_outputs_match_direct_run(rng, hw):
    for seed in range(10):
        g = random_dag(rng, 25)
        stimulus = make_stimulus(g, 2, 2, 5_000, seed=seed)
        report = _run(g, hw, stimulus)
        assert report.output_spikes == simulate_direct(g, stimulus).output_spikes
        assert report.spikes_conserved


def test_stale_artifacts_rejected(chain7, hw):
    dfg, platform, fabric, schedule = _deploy(chain7, hw, ONE_SPIKE)
    stale = schedule.copy(update={"dfg_hash": "0" * 64})
    with pytest.raises(InconsistentArtifactError, match="inconsistent artifact versions"):
        simulate_mapped(dfg, platform, fabric, stale, ONE_SPIKE)
    other = dfg.copy(update={"exec_times": (1, 1, 1)})
    with pytest.raises(InconsistentArtifactError):
        simulate_mapped(other, platform, fabric, schedule, ONE_SPIKE)


def test_silent_input_costs_no_dynamic_energy(chain7, hw):
    silent = Stimulus(images=({},))
    dfg, platform, fabric, schedule = _deploy(chain7, hw, ONE_SPIKE)
    report = simulate_mapped(dfg, platform, fabric, schedule, silent, hw=hw)
    assert report.dynamic_fj == 0
    assert report.interconnect_fj == 0
    assert report.makespan_ps == 6100
    assert report.static_fj > 0


def test_images_cycle_through_stimulus(chain7, hw):
    report = _run(chain7, hw, ONE_SPIKE, images=3)
    assert report.images == 3
    assert report.total_spikes == 21
    assert len(report.latencies_ps) == 3


def test_pipelining_shortens_the_batch(chain7, hw):
    piped = _run(chain7, hw, ONE_SPIKE, images=2, batch=2)
    serial = _run(chain7, hw, ONE_SPIKE, images=2, batch=2, overlap=False)
    assert piped.makespan_ps == 8230
    assert serial.makespan_ps == 12_380
    assert piped.throughput > serial.throughput
    assert piped.dynamic_fj == serial.dynamic_fj
    assert piped.static_fj < serial.static_fj
