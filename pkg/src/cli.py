"""``sentryos`` command line: generate, inspect, compile, plan, schedule, simulate, compare.

Stages talk through files only. Every JSON artifact records the hashes of the
files it was built from, and downstream stages refuse mismatched inputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from src.common.config import load_settings
from src.common.errors import InconsistentArtifactError, SentryError
from src.export.csv import write_comparison, write_cores, write_gantt
from src.graph.generate import build_workload, generate_network, load_workload
from src.graph.io import graph_to_dict, load_graph, load_stimulus, save_graph
from src.graph.stats import neighbor_stats
from src.graph.stimulus import Stimulus, make_stimulus
from src.hw.config import HARDWARE_PATH, HardwareConfig, load_hardware
from src.hw.cores import Backend, backend_palette
from src.hw.platform import build_platform
from src.persist.artifacts import content_hash, read_artifact, write_artifact
from src.reporting import directions
from src.sentryc.compiler import compile_graph
from src.sentryc.io import dfg_from_dict, dfg_hash, dfg_to_dict
from src.sentryc.profile import profile_channels
from src.segbus.cost import NocDescriptor, build_noc, interconnect_cost
from src.segbus.planner import BusProgram, plan_lanes, program_switches
from src.segbus.topology import place_cores
from src.sensors import sensor
from src.sentryrt.pipelines import allocate_pipelines
from src.sentryrt.schedule import Schedule, channel_activity, schedule_batch
from src.simulator.experiments import SUITES, compare_experiments, load_corpus
from src.simulator.mapped import simulate_mapped

log = logging.getLogger(__name__)


def _write_json(path: Path, data: object) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    log.info("saved %s", path)
    return path


def _hw_hash(hw: HardwareConfig) -> str:
    return content_hash(json.loads(hw.json()))


def _stimulus(args: argparse.Namespace, g, settings) -> Stimulus:
    if args.stimulus:
        return load_stimulus(args.stimulus, g)
    exp = settings.experiments
    images = args.images or exp.images
    return make_stimulus(g, images, exp.spikes_per_input, exp.window_ps, args.seed)


# --------------------------------------------------------------------------- #
# subcommands                                                                 #
# --------------------------------------------------------------------------- #
@sensor("generate")
def cmd_generate(args: argparse.Namespace) -> int:
    settings = load_settings()
    if args.workload:
        w = load_workload(args.workload)
        g = build_workload(w)
    else:
        spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        g = generate_network(
            spec,
            args.prune,
            args.seed,
            name=args.name,
            threshold=settings.graph.default_threshold,
            weight_bits=settings.graph.weight_bits,
            weight_mean=settings.graph.weight_mean,
        )
    save_graph(g, args.out)
    return 0


@sensor("stats")
def cmd_stats(args: argparse.Namespace) -> int:
    stats = neighbor_stats(load_graph(args.graph))
    summary = stats.summary()
    if args.out:
        _write_json(args.out, summary)
    else:
        print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


@sensor("compile")
def cmd_compile(args: argparse.Namespace) -> int:
    settings = load_settings()
    hw = load_hardware(args.hw)
    g = load_graph(args.graph)
    backend = Backend(args.backend)
    if backend is Backend.MUBRAIN:
        if args.palette == "custom":
            stats = neighbor_stats(g)
            palette = hw.custom_palette(stats.l1_max, stats.l2_max)
        else:
            palette = hw.palette(args.palette)
    else:
        palette = tuple(backend_palette(backend))
    dfg = compile_graph(
        g,
        palette,
        hw.cost_model,
        backend,
        relay_policy=args.relay_policy or settings.compiler.relay_policy,
        merge=settings.compiler.merge and not args.no_merge,
    )
    stimulus = _stimulus(args, g, settings)
    dfg = profile_channels(dfg, g, stimulus, hw.timing, settings.simulator)
    write_artifact(
        args.out,
        "dfg",
        {"dfg": dfg_to_dict(dfg), "palette": [json.loads(c.json()) for c in palette]},
        {"graph": content_hash(graph_to_dict(g)), "hardware": _hw_hash(hw)},
    )
    return 0


def _load_dfg(path: Path):
    art = read_artifact(path, "dfg")
    return art, dfg_from_dict(art.payload["dfg"])


@sensor("schedule")
def cmd_schedule(args: argparse.Namespace) -> int:
    settings = load_settings()
    art, dfg = _load_dfg(args.dfg)
    pipelines = allocate_pipelines(dfg, args.cores or len(dfg.subnets))
    schedule = schedule_batch(
        dfg,
        pipelines,
        args.batch or settings.experiments.batch_size,
        overlap=not args.no_overlap,
        cfg=settings.scheduler,
        dfg_hash=dfg_hash(dfg),
    )
    write_artifact(
        args.out,
        "schedule",
        {"schedule": json.loads(schedule.json()), "summary": schedule.summary()},
        {"dfg": art.content_hash},
    )
    if args.gantt:
        write_gantt(schedule, args.gantt)
    return 0


def _load_schedule(path: Path, dfg_digest: str) -> Schedule:
    art = read_artifact(path, "schedule")
    art.require(dfg=dfg_digest)
    return Schedule.parse_obj(art.payload["schedule"])


@sensor("plan-bus")
def cmd_plan_bus(args: argparse.Namespace) -> int:
    hw = load_hardware(args.hw)
    art, dfg = _load_dfg(args.dfg)
    placement = place_cores(dfg)
    inputs = {"dfg": art.content_hash}
    if args.interconnect == "noc":
        noc = build_noc(dfg, placement, hw.interconnect.noc, dfg_hash=dfg_hash(dfg))
        payload = {"kind": "noc", "noc": json.loads(noc.json())}
    else:
        if not args.schedule:
            raise InconsistentArtifactError("segmented bus planning needs --schedule")
        schedule = _load_schedule(args.schedule, art.content_hash)
        activity = channel_activity(dfg, schedule)
        plan = plan_lanes(dfg, placement, activity)
        program = program_switches(
            dfg,
            placement,
            plan,
            activity,
            dfg_hash=dfg_hash(dfg),
            segment_length_um=hw.interconnect.segbus.segment_length_um,
        )
        payload = {
            "kind": "segbus",
            "program": json.loads(program.json()),
            "lanes": json.loads(plan.json()),
        }
        inputs["schedule"] = content_hash(json.loads(schedule.json()))
    write_artifact(args.out, "interconnect", payload, inputs)
    return 0


@sensor("simulate")
def cmd_simulate(args: argparse.Namespace) -> int:
    settings = load_settings()
    hw = load_hardware(args.hw)
    art, dfg = _load_dfg(args.dfg)
    schedule = _load_schedule(args.schedule, art.content_hash)
    bus = read_artifact(args.bus, "interconnect")
    bus.require(dfg=art.content_hash)
    if bus.payload["kind"] == "noc":
        fabric: BusProgram | NocDescriptor = NocDescriptor.parse_obj(bus.payload["noc"])
    else:
        fabric = BusProgram.parse_obj(bus.payload["program"])
    interconnect = bus.payload["kind"]
    palette = [c for c in (s.assigned_config for s in dfg.subnets) if c is not None]
    platform = build_platform(dfg, list({c.name: c for c in palette}.values()), interconnect)
    stimulus = _stimulus(args, dfg.mapped_graph(), settings)
    report = simulate_mapped(
        dfg,
        platform,
        fabric,
        schedule,
        stimulus,
        args.images,
        hw=hw,
        sim=settings.simulator,
    )
    wire = interconnect_cost(fabric, report.channel_spikes, hw.interconnect)
    payload = json.loads(report.json())
    payload["summary"] = report.summary()
    payload["interconnect_cost"] = {"energy_pj": wire.energy_pj, "latency_ps": wire.latency_ps}
    write_artifact(
        args.out,
        "report",
        payload,
        {"dfg": art.content_hash, "interconnect": bus.content_hash, "hardware": _hw_hash(hw)},
    )
    if args.cores_csv:
        write_cores(report, args.cores_csv)
    return 0


@sensor("compare")
def cmd_compare(args: argparse.Namespace) -> int:
    settings = load_settings()
    hw = load_hardware(args.hw)
    corpus = load_corpus(args.workloads or settings.experiments.workloads_dir)
    df = compare_experiments(
        corpus, args.suite, hw, settings, seed=args.seed, workers=args.workers, progress=True
    )
    write_comparison(df, args.out)
    if args.report:
        directions.run(args.out, args.report)
    return 0


# --------------------------------------------------------------------------- #
# entry points                                                                #
# --------------------------------------------------------------------------- #
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sentryos", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, hw: bool = False) -> None:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=Path, required=True)
        if hw:
            p.add_argument("--hw", type=Path, default=HARDWARE_PATH)

    p = sub.add_parser("generate", help="build a synthetic SDCNN graph")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--workload", type=Path)
    src.add_argument("--spec", type=Path)
    p.add_argument("--prune", type=float, default=0.0)
    p.add_argument("--name", default="sdcnn")
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stats", help="L1/L2 neighbour statistics of a graph")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("compile", help="partition a graph onto cores and profile it")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--backend", choices=[b.value for b in Backend], default="mubrain")
    palettes = ["one", "conservative", "two", "four", "eight", "custom"]
    p.add_argument("--palette", choices=palettes, default="four")
    p.add_argument("--relay-policy", choices=["always", "programmable"])
    p.add_argument("--no-merge", action="store_true")
    p.add_argument("--stimulus", type=Path)
    p.add_argument("--images", type=int)
    common(p, hw=True)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("schedule", help="self-timed batch schedule")
    p.add_argument("--dfg", type=Path, required=True)
    p.add_argument("--batch", type=int)
    p.add_argument("--cores", type=int)
    p.add_argument("--no-overlap", action="store_true")
    p.add_argument("--gantt", type=Path)
    common(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("plan-bus", help="lane plan and switch program, or a NoC baseline")
    p.add_argument("--dfg", type=Path, required=True)
    p.add_argument("--schedule", type=Path)
    p.add_argument("--interconnect", choices=["segbus", "noc"], default="segbus")
    common(p, hw=True)
    p.set_defaults(func=cmd_plan_bus)

    p = sub.add_parser("simulate", help="simulate the mapped application")
    p.add_argument("--dfg", type=Path, required=True)
    p.add_argument("--schedule", type=Path, required=True)
    p.add_argument("--bus", type=Path, required=True)
    p.add_argument("--stimulus", type=Path)
    p.add_argument("--images", type=int)
    p.add_argument("--cores-csv", type=Path)
    common(p, hw=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="run a comparison suite over a workload corpus")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--workloads", type=Path)
    p.add_argument("--workers", type=int)
    p.add_argument("--report", type=Path)
    common(p, hw=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SentryError, OSError, RuntimeError, KeyError) as exc:
        log.error("%s failed: %s", args.command, exc)
        print(f"{args.command} failed: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    run()
