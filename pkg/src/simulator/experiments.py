"""Comparison sweeps over palettes, interconnects, schedulers and backends.

Every (workload, variant) pair is an independent compile -> profile ->
schedule -> plan -> simulate run; runs fan out over worker threads and the
rows come back in a fixed order.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Literal

import pandas as pd
from pydantic import BaseModel
from tqdm import tqdm

from src.common.config import Settings
from src.graph.generate import build_workload, load_workload
from src.graph.model import SdcnnGraph
from src.graph.stats import neighbor_stats
from src.graph.stimulus import make_stimulus
from src.hw.config import HardwareConfig
from src.hw.cores import Backend, CoreConfig, backend_palette
from src.hw.platform import build_platform
from src.qa.expectations import COMPARISON_SCHEMA
from src.sentryc.compiler import compile_graph
from src.sentryc.io import dfg_hash
from src.sentryc.profile import profile_channels
from src.segbus.cost import build_noc, interconnect_cost
from src.segbus.planner import plan_lanes, program_switches
from src.segbus.topology import place_cores
from src.sentryrt.pipelines import allocate_pipelines
from src.sentryrt.schedule import channel_activity, schedule_batch
from src.simulator.mapped import FJ_PER_PJ, simulate_mapped

log = logging.getLogger(__name__)


class Variant(BaseModel):
    name: str
    palette: str = "four"
    interconnect: Literal["segbus", "noc"] = "segbus"
    pipelined: bool = True
    backend: Backend = Backend.MUBRAIN

    class Config:
        frozen = True


SUITES: dict[str, tuple[Variant, ...]] = {
    "fig4": (
        Variant(name="conservative", palette="conservative"),
        Variant(name="custom", palette="custom"),
    ),
    "fig8": (
        Variant(name="noc", interconnect="noc"),
        Variant(name="segbus", interconnect="segbus"),
    ),
    "fig9": (
        Variant(name="1-config", palette="one"),
        Variant(name="2-config", palette="two"),
        Variant(name="4-config", palette="four"),
        Variant(name="8-config", palette="eight"),
    ),
    "fig10": (
        Variant(name="non-pipelined", pipelined=False),
        Variant(name="pipelined", pipelined=True),
    ),
    "backends": (
        Variant(name="dynaps", backend=Backend.DYNAPS),
        Variant(name="loihi", backend=Backend.LOIHI),
        Variant(name="mubrain", backend=Backend.MUBRAIN),
    ),
}

# column each suite normalises to its first variant
NORMALISE = {
    "fig4": "total_pj",
    "fig8": "interconnect_pj",
    "fig9": "total_pj",
    "fig10": "throughput_per_us",
    "backends": "core_pj",
}


def load_corpus(directory: Path) -> dict[str, SdcnnGraph]:
    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise FileNotFoundError(f"no workload files under {directory}")
    corpus = {}
    for p in paths:
        w = load_workload(p)
        corpus[w.name] = build_workload(w)
    log.info("loaded %d workload(s) from %s", len(corpus), directory)
    return corpus


def variant_palette(g: SdcnnGraph, v: Variant, hw: HardwareConfig) -> tuple[CoreConfig, ...]:
    if v.backend is not Backend.MUBRAIN:
        return tuple(backend_palette(v.backend))
    if v.palette == "custom":
        stats = neighbor_stats(g)
        return hw.custom_palette(stats.l1_max, stats.l2_max)
    return hw.palette(v.palette)


def run_variant(
    workload: str,
    g: SdcnnGraph,
    v: Variant,
    hw: HardwareConfig,
    settings: Settings,
    seed: int = 0,
) -> dict[str, object]:
    exp = settings.experiments
    palette = variant_palette(g, v, hw)
    dfg = compile_graph(
        g,
        palette,
        hw.cost_model,
        v.backend,
        relay_policy=settings.compiler.relay_policy,
        merge=settings.compiler.merge,
    )
    stimulus = make_stimulus(g, exp.images, exp.spikes_per_input, exp.window_ps, seed)
    dfg = profile_channels(dfg, g, stimulus, hw.timing, settings.simulator)
    digest = dfg_hash(dfg)
    pipelines = allocate_pipelines(dfg, len(dfg.subnets))
    schedule = schedule_batch(
        dfg,
        pipelines,
        exp.batch_size,
        overlap=v.pipelined,
        cfg=settings.scheduler,
        dfg_hash=digest,
    )
    placement = place_cores(dfg)
    lanes = 0
    if v.interconnect == "segbus":
        activity = channel_activity(dfg, schedule)
        plan = plan_lanes(dfg, placement, activity)
        lanes = plan.lanes
        fabric = program_switches(
            dfg,
            placement,
            plan,
            activity,
            dfg_hash=digest,
            segment_length_um=hw.interconnect.segbus.segment_length_um,
        )
    else:
        fabric = build_noc(dfg, placement, hw.interconnect.noc, dfg_hash=digest)
    platform = build_platform(dfg, palette, v.interconnect)
    report = simulate_mapped(
        dfg, platform, fabric, schedule, stimulus, exp.batch_size, hw=hw, sim=settings.simulator
    )
    wire = interconnect_cost(fabric, report.channel_spikes, hw.interconnect)
    return {
        "workload": workload,
        "variant": v.name,
        "palette": v.palette if v.backend is Backend.MUBRAIN else v.backend.value,
        "backend": v.backend.value,
        "interconnect": v.interconnect,
        "pipelined": v.pipelined,
        "cores": len(dfg.subnets),
        "channels": len(dfg.channels),
        "lanes": lanes,
        "total_spikes": report.total_spikes,
        "static_pj": report.static_fj / FJ_PER_PJ,
        "dynamic_pj": report.dynamic_fj / FJ_PER_PJ,
        "core_pj": report.core_fj / FJ_PER_PJ,
        "interconnect_pj": report.interconnect_fj / FJ_PER_PJ,
        "total_pj": report.total_pj,
        "energy_per_core_pj": report.core_fj / FJ_PER_PJ / len(dfg.subnets),
        "interconnect_latency_ps": wire.latency_ps,
        "makespan_ps": report.makespan_ps,
        "mean_latency_ps": report.mean_latency_ps,
        "throughput_per_us": report.throughput * 1e6,
    }


def normalise(df: pd.DataFrame, column: str) -> pd.DataFrame:
    """Add ``normalized``: *column* over the first variant's value, per workload."""
    ref = df.groupby("workload", sort=False)[column].transform("first")
    df = df.copy()
    df["normalized"] = (df[column] / ref.where(ref != 0)).fillna(1.0)
    return df


def compare_experiments(
    workloads: Mapping[str, SdcnnGraph],
    variants: str | Sequence[Variant],
    hw: HardwareConfig | None = None,
    settings: Settings | None = None,
    *,
    seed: int = 0,
    workers: int | None = None,
    progress: bool = False,
) -> pd.DataFrame:
    """One row per (workload, variant), in input order, with a ``normalized`` column."""
    hw = hw or HardwareConfig()
    settings = settings or Settings()
    suite = variants if isinstance(variants, str) else "custom"
    if isinstance(variants, str):
        if variants not in SUITES:
            raise KeyError(f"unknown suite {variants!r}; expected one of {sorted(SUITES)}")
        variants = SUITES[variants]
    jobs = [(name, g, v) for name, g in workloads.items() for v in variants]
    workers = workers or settings.experiments.workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(run_variant, name, g, v, hw, settings, seed) for name, g, v in jobs
        ]
        rows = [f.result() for f in tqdm(futures, desc=suite, disable=not progress)]
    df = pd.DataFrame(rows)
    df.insert(0, "suite", suite)
    df = normalise(df, NORMALISE.get(suite, "total_pj"))
    COMPARISON_SCHEMA.validate(df)
    log.info("%s: %d run(s) over %d workload(s)", suite, len(df), len(workloads))
    return df
