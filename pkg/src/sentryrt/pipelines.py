"""Grouping of sub-networks into pipelines of cores."""

from __future__ import annotations

import logging

from src.common.errors import InsufficientCoresError
from src.sentryc.dfg import DataflowGraph

log = logging.getLogger(__name__)


def allocate_pipelines(dfg: DataflowGraph, num_cores: int) -> dict[int, int]:
    """Map sub-network id -> pipeline id by chain contraction.

    A sub-network extends its predecessor's pipeline when it is that
    predecessor's only successor and has no other predecessor; anything else
    opens a new pipeline. Each sub-network still owns one core.
    """
    if num_cores < len(dfg.subnets):
        raise InsufficientCoresError(
            f"{len(dfg.subnets)} sub-networks need {len(dfg.subnets)} cores, "
            f"only {num_cores} available"
        )
    pipeline: dict[int, int] = {}
    count = 0
    for sid in dfg.topological_order():
        preds = dfg.predecessors(sid)
        if len(preds) == 1 and dfg.successors(preds[0]) == [sid]:
            pipeline[sid] = pipeline[preds[0]]
            continue
        pipeline[sid] = count
        count += 1
    log.info("%s: %d sub-network(s) on %d pipeline(s)", dfg.name, len(pipeline), count)
    return dict(sorted(pipeline.items()))
