"""Graph and stimulus files (JSON)."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from jsonschema import ValidationError as SchemaError
from jsonschema import validate
from pydantic import ValidationError

from src.common.errors import GraphValidationError, ProfileError
from src.graph.model import NeuronKind, SdcnnGraph
from src.graph.stimulus import Stimulus

log = logging.getLogger(__name__)

GRAPH_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["neurons", "synapses"],
    "properties": {
        "name": {"type": "string"},
        "weight_bits": {"type": "integer", "minimum": 2},
        "neurons": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "kind": {"enum": [k.value for k in NeuronKind]},
                    "threshold": {"type": "integer", "minimum": 1},
                    "reset_mode": {"enum": ["to_zero"]},
                },
            },
        },
        "synapses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["src", "dst", "weight"],
                "properties": {
                    "src": {"type": "integer", "minimum": 0},
                    "dst": {"type": "integer", "minimum": 0},
                    "weight": {"type": "integer"},
                },
            },
        },
    },
}

STIMULUS_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["images"],
    "properties": {
        "images": {
            "type": "array",
            "items": {
                "type": "object",
                "patternProperties": {
                    "^[0-9]+$": {"type": "array", "items": {"type": "integer", "minimum": 0}}
                },
                "additionalProperties": False,
            },
        }
    },
}


def _read_json(path: Path, what: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        log.error("malformed %s file %s: %s", what, path, exc)
        raise GraphValidationError(f"malformed {what} file {path}: {exc}") from exc


def _messages(exc: ValidationError) -> str:
    return "; ".join(str(e["msg"]) for e in exc.errors())


def graph_from_dict(data: dict[str, Any]) -> SdcnnGraph:
    try:
        validate(instance=data, schema=GRAPH_SCHEMA)
    except SchemaError as exc:
        raise GraphValidationError(f"graph schema violation: {exc.message}") from exc
    for n in data["neurons"]:
        if n.get("kind") == NeuronKind.RELAY.value:
            raise GraphValidationError(f"relay neuron {n['id']} in ingested graph")
    try:
        return SdcnnGraph(**data)
    except ValidationError as exc:
        raise GraphValidationError(_messages(exc)) from exc


def graph_to_dict(g: SdcnnGraph) -> dict[str, Any]:
    return {
        "name": g.name,
        "weight_bits": g.weight_bits,
        "neurons": [
            {
                "id": n.id,
                "kind": n.kind.value,
                "threshold": n.threshold,
                "reset_mode": n.reset_mode.value,
            }
            for n in g.neurons
        ],
        "synapses": [{"src": s.src, "dst": s.dst, "weight": s.weight} for s in g.synapses],
    }


def load_graph(path: Path) -> SdcnnGraph:
    """Read and validate a graph file."""
    g = graph_from_dict(_read_json(path, "graph"))
    log.info("loaded graph %s: %d neurons, %d synapses", g.name, len(g.neurons), len(g.synapses))
    return g


def save_graph(g: SdcnnGraph, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(graph_to_dict(g), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    log.info("saved graph %s -> %s", g.name, path)
    return path


def stimulus_to_dict(s: Stimulus) -> dict[str, Any]:
    return {"images": [{str(k): list(v) for k, v in image.items()} for image in s.images]}


def load_stimulus(path: Path, g: SdcnnGraph | None = None) -> Stimulus:
    """Read a stimulus file; with *g* given, every key must be a neuron of *g*."""
    data = _read_json(path, "stimulus")
    try:
        validate(instance=data, schema=STIMULUS_SCHEMA)
    except SchemaError as exc:
        raise ProfileError(f"stimulus schema violation: {exc.message}") from exc
    stim = Stimulus(images=data["images"])
    if g is not None:
        check_stimulus(stim, g)
    return stim


def save_stimulus(s: Stimulus, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(stimulus_to_dict(s), sort_keys=True) + "\n", encoding="utf-8")
    return path


def check_stimulus(s: Stimulus, g: SdcnnGraph) -> None:
    """Raise ProfileError when an image drives a neuron that is not an input of *g*."""
    inputs = set(g.inputs())
    for idx, image in enumerate(s.images):
        for nid in image:
            if nid not in inputs:
                raise ProfileError(f"stimulus image {idx} references unknown input neuron {nid}")
