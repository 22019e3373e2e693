"""Table expectations for everything written as CSV."""

import logging

import pandera as pa

log = logging.getLogger(__name__)

_nonneg = pa.Check.ge(0)

COMPARISON_SCHEMA = pa.DataFrameSchema(
    {
        "suite": pa.Column(str),
        "workload": pa.Column(str),
        "variant": pa.Column(str),
        "palette": pa.Column(str),
        "backend": pa.Column(str, pa.Check.isin(["mubrain", "dynaps", "loihi"])),
        "interconnect": pa.Column(str, pa.Check.isin(["segbus", "noc"])),
        "pipelined": pa.Column(bool),
        "cores": pa.Column(int, pa.Check.ge(1)),
        "channels": pa.Column(int, _nonneg),
        "lanes": pa.Column(int, _nonneg),
        "total_spikes": pa.Column(int, _nonneg),
        "static_pj": pa.Column(float, _nonneg),
        "dynamic_pj": pa.Column(float, _nonneg),
        "core_pj": pa.Column(float, _nonneg),
        "interconnect_pj": pa.Column(float, _nonneg),
        "total_pj": pa.Column(float, _nonneg),
        "energy_per_core_pj": pa.Column(float, _nonneg),
        "interconnect_latency_ps": pa.Column(int, _nonneg),
        "makespan_ps": pa.Column(int, pa.Check.gt(0)),
        "mean_latency_ps": pa.Column(float, _nonneg),
        "throughput_per_us": pa.Column(float, _nonneg),
        "normalized": pa.Column(float, _nonneg),
    },
    strict=True,
    ordered=True,
)

GANTT_SCHEMA = pa.DataFrameSchema(
    {
        "subnet": pa.Column(int, _nonneg),
        "image": pa.Column(int, _nonneg),
        "core": pa.Column(int, _nonneg),
        "pipeline": pa.Column(int, _nonneg),
        "start_ps": pa.Column(int, _nonneg),
        "end_ps": pa.Column(int, _nonneg),
    },
    checks=pa.Check(lambda df: (df["end_ps"] >= df["start_ps"]).all(), error="end before start"),
    strict=True,
    ordered=True,
)

CORE_SCHEMA = pa.DataFrameSchema(
    {
        "core": pa.Column(int, _nonneg, unique=True),
        "config": pa.Column(str),
        "spikes": pa.Column(int, _nonneg),
        "static_fj": pa.Column(int, _nonneg),
        "dynamic_fj": pa.Column(int, _nonneg),
    },
    strict=True,
    ordered=True,
)
