"""Self-timed batch schedules over core pipelines."""

from __future__ import annotations

import logging
from collections.abc import Mapping

from pydantic import BaseModel, Field

from src.common.config import SchedulerConfig
from src.common.diagnostics import validate_io
from src.common.errors import ScheduleError
from src.sentryc.dfg import DataflowGraph
from src.sentryrt.maxplus import steady_state_interval, timing_matrix
from src.sentryrt.oracle import self_timed_ends

log = logging.getLogger(__name__)


class Slot(BaseModel):
    subnet: int
    image: int
    core: int
    pipeline: int
    start: int
    end: int

    class Config:
        frozen = True


class Schedule(BaseModel):
    dfg_hash: str = ""
    batch_size: int = Field(..., ge=1)
    overlap: bool = True
    pipelines: dict[int, int]
    slots: tuple[Slot, ...]
    makespan: int
    latencies: tuple[int, ...]
    interval: float

    class Config:
        frozen = True

    @property
    def throughput(self) -> float:
        """Images per ps over the whole batch."""
        return self.batch_size / self.makespan if self.makespan else 0.0

    @property
    def mean_latency(self) -> float:
        return sum(self.latencies) / len(self.latencies)

    def slot(self, subnet: int, image: int) -> Slot:
        return self.slots[image * len(self.pipelines) + subnet]

    def summary(self) -> dict[str, float | int | bool]:
        return {
            "batch_size": self.batch_size,
            "overlap": self.overlap,
            "pipelines": len(set(self.pipelines.values())),
            "makespan_ps": self.makespan,
            "mean_latency_ps": self.mean_latency,
            "throughput_per_us": self.throughput * 1e6,
            "interval_ps": self.interval,
        }


def check_schedule(s: Schedule, dfg: DataflowGraph) -> None:
    """Duration, precedence and one-image-at-a-time per core."""
    n = len(dfg.subnets)
    for sl in s.slots:
        if sl.end - sl.start != dfg.exec_times[sl.subnet]:
            raise ScheduleError(f"sub-network {sl.subnet} image {sl.image}: wrong duration")
        for p in dfg.predecessors(sl.subnet):
            if sl.start < s.slot(p, sl.image).end:
                raise ScheduleError(
                    f"sub-network {sl.subnet} image {sl.image} starts before predecessor {p}"
                )
        if sl.image and sl.start < s.slot(sl.subnet, sl.image - 1).end:
            raise ScheduleError(f"core {sl.core} runs two images at once")
    if len(s.slots) != n * s.batch_size:
        raise ScheduleError("schedule does not cover every sub-network and image")


@validate_io
def schedule_batch(
    dfg: DataflowGraph,
    pipelines: Mapping[int, int],
    batch_size: int,
    *,
    overlap: bool = True,
    cfg: SchedulerConfig | None = None,
    dfg_hash: str = "",
) -> Schedule:
    """Self-timed schedule of *batch_size* images.

    ``overlap=False`` gives the non-pipelined baseline: one image at a time.
    """
    if batch_size < 1:
        raise ScheduleError(f"batch size {batch_size} < 1")
    t = timing_matrix(dfg)
    missing = sorted({s.id for s in dfg.subnets} - set(pipelines))
    if missing:
        raise ScheduleError(f"sub-network {missing[0]} has no pipeline")
    times = list(dfg.exec_times)
    edges = sorted({(c.src_subnet, c.dst_subnet) for c in dfg.channels})
    ends = self_timed_ends(times, edges, batch_size, overlap=overlap)
    slots = []
    latencies = []
    for b in range(batch_size):
        starts = []
        for sid in range(len(times)):
            end = int(ends[b, sid])
            start = end - times[sid]
            starts.append(start)
            slots.append(
                Slot(
                    subnet=sid, image=b, core=sid, pipeline=pipelines[sid], start=start, end=end
                )
            )
        latencies.append(int(ends[b].max()) - min(starts))
    schedule = Schedule(
        dfg_hash=dfg_hash,
        batch_size=batch_size,
        overlap=overlap,
        pipelines=dict(pipelines),
        slots=tuple(slots),
        makespan=int(ends.max()),
        latencies=tuple(latencies),
        interval=steady_state_interval(t, cfg),
    )
    check_schedule(schedule, dfg)
    log.info(
        "schedule %s: B=%d overlap=%s makespan=%d ps interval=%.0f ps",
        dfg.name,
        batch_size,
        overlap,
        schedule.makespan,
        schedule.interval,
    )
    return schedule


def channel_activity(dfg: DataflowGraph, schedule: Schedule) -> dict[int, list[tuple[int, int]]]:
    """A channel is busy while its producer runs, once per image."""
    return {
        c.id: [(sl.start, sl.end) for sl in schedule.slots if sl.subnet == c.src_subnet]
        for c in dfg.channels
    }


def gantt_rows(schedule: Schedule) -> list[dict[str, int]]:
    return [
        {
            "subnet": sl.subnet,
            "image": sl.image,
            "core": sl.core,
            "pipeline": sl.pipeline,
            "start_ps": sl.start,
            "end_ps": sl.end,
        }
        for sl in schedule.slots
    ]
