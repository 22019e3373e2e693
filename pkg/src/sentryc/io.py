"""Dataflow-graph files."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from src.common.errors import CompileError
from src.persist.artifacts import content_hash
from src.sentryc.dfg import DataflowGraph, check_dataflow_graph

log = logging.getLogger(__name__)


def dfg_to_dict(dfg: DataflowGraph) -> dict[str, Any]:
    return json.loads(dfg.json())


def dfg_from_dict(data: dict[str, Any]) -> DataflowGraph:
    try:
        dfg = DataflowGraph.parse_obj(data)
    except ValidationError as exc:
        log.error("dataflow graph rejected: %s", exc)
        raise CompileError(f"invalid dataflow graph: {exc.errors()[0]['msg']}") from exc
    check_dataflow_graph(dfg)
    return dfg


def dfg_hash(dfg: DataflowGraph) -> str:
    return content_hash(dfg_to_dict(dfg))


def save_dfg(dfg: DataflowGraph, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(dfg_to_dict(dfg), indent=1, sort_keys=True) + "\n", "utf-8")
    return path


def load_dfg(path: Path) -> DataflowGraph:
    return dfg_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
