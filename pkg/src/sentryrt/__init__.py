from src.sentryrt.maxplus import (
    NEG_INF,
    maxplus_evolve,
    oplus,
    otimes,
    steady_state_interval,
    timing_matrix,
)
from src.sentryrt.oracle import self_timed_ends
from src.sentryrt.pipelines import allocate_pipelines
from src.sentryrt.schedule import Schedule, Slot, channel_activity, schedule_batch

__all__ = [
    "NEG_INF",
    "Schedule",
    "Slot",
    "allocate_pipelines",
    "channel_activity",
    "maxplus_evolve",
    "oplus",
    "otimes",
    "schedule_batch",
    "self_timed_ends",
    "steady_state_interval",
    "timing_matrix",
]
