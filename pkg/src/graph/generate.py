"""Synthetic SDCNN generator.

Layers are described by small pydantic models (``type`` selects the kind).
Each layer reads from the layers named in ``inputs`` (default: the previous
layer), which is how residual ``add`` and dense ``concat`` blocks reach back
to earlier feature maps. Every layer except ``concat`` owns one neuron per
feature-map element; ``concat`` is a channel-wise view over its inputs.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from src.common.errors import LayerSpecError
from src.graph.model import Neuron, NeuronKind, SdcnnGraph, Synapse, weight_range

log = logging.getLogger(__name__)


class _Layer(BaseModel):
    name: str | None = None
    inputs: list[str] | None = None
    threshold: int | None = Field(None, ge=1)

    class Config:
        extra = "forbid"


class InputLayer(_Layer):
    type: Literal["input"]
    channels: int = Field(1, ge=1)
    height: int = Field(..., ge=1)
    width: int = Field(..., ge=1)


class ConvLayer(_Layer):
    type: Literal["conv"]
    channels: int = Field(1, ge=1)
    kernel: int = Field(..., ge=1)
    stride: int = Field(1, ge=1)
    padding: int = Field(0, ge=0)


class PoolLayer(_Layer):
    type: Literal["pool"]
    kernel: int = Field(2, ge=1)
    stride: int | None = Field(None, ge=1)


class DenseLayer(_Layer):
    type: Literal["dense"]
    units: int = Field(..., ge=1)


class ConcatLayer(_Layer):
    type: Literal["concat"]


class AddLayer(_Layer):
    type: Literal["add"]


LayerSpec = Annotated[
    Union[InputLayer, ConvLayer, PoolLayer, DenseLayer, ConcatLayer, AddLayer],
    Field(discriminator="type"),
]


class Workload(BaseModel):
    """A named generator recipe, as stored under ``configs/workloads``."""

    name: str
    layers: list[LayerSpec]
    prune_fraction: float = Field(0.0, ge=0.0, lt=1.0)
    seed: int = 0
    threshold: int = Field(64, ge=1)
    weight_bits: int = Field(2, ge=2, le=16)
    weight_mean: float = 0.5


class _Layers(BaseModel):
    layers: list[LayerSpec]


@dataclass
class _Map:
    ids: np.ndarray  # (channels, height, width) neuron ids

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.ids.shape  # type: ignore[return-value]


def _coerce(spec: list) -> list[_Layer]:
    try:
        return list(_Layers(layers=spec).layers)
    except ValidationError as exc:
        raise LayerSpecError("; ".join(str(e["msg"]) for e in exc.errors())) from exc


def _conv_pairs(src: np.ndarray, dst: np.ndarray, kernel: int, stride: int, padding: int):
    _, h, w = src.shape
    _, ho, wo = dst.shape
    oy = np.arange(ho)[:, None]
    ox = np.arange(wo)[None, :]
    for dy in range(kernel):
        for dx in range(kernel):
            iy = oy * stride - padding + dy
            ix = ox * stride - padding + dx
            yy, xx = np.nonzero((iy >= 0) & (iy < h) & (ix >= 0) & (ix < w))
            if yy.size == 0:
                continue
            s = src[:, yy * stride - padding + dy, xx * stride - padding + dx]  # (C, n)
            d = dst[:, yy, xx]  # (Co, n)
            shape = (s.shape[0], d.shape[0], yy.size)
            yield (
                np.broadcast_to(s[:, None, :], shape).ravel(),
                np.broadcast_to(d[None, :, :], shape).ravel(),
            )


def _pool_pairs(src: np.ndarray, dst: np.ndarray, kernel: int, stride: int):
    _, h, w = src.shape
    _, ho, wo = dst.shape
    oy = np.arange(ho)[:, None]
    ox = np.arange(wo)[None, :]
    for dy in range(kernel):
        for dx in range(kernel):
            iy = oy * stride + dy
            ix = ox * stride + dx
            yy, xx = np.nonzero(np.broadcast_to((iy < h) & (ix < w), (ho, wo)))
            yield src[:, yy * stride + dy, xx * stride + dx].ravel(), dst[:, yy, xx].ravel()


def _out_dim(size: int, kernel: int, stride: int, padding: int) -> int:
    return (size + 2 * padding - kernel) // stride + 1


def generate_network(
    spec: list,
    prune_fraction: float = 0.0,
    seed: int = 0,
    *,
    name: str = "sdcnn",
    threshold: int = 64,
    weight_bits: int = 2,
    weight_mean: float = 0.5,
) -> SdcnnGraph:
    """Build a pruned, quantised feed-forward graph from a layer list.

    Float weights are drawn in canonical synapse order from a seeded normal
    distribution; the ``floor(prune_fraction * n)`` smallest magnitudes are removed
    (ties by synapse id) and survivors are rounded into the signed weight range,
    with zero mapped to +/-1 so no surviving synapse is silent.
    """
    layers = _coerce(spec)
    if not layers:
        raise LayerSpecError("empty layer spec")
    if not 0.0 <= prune_fraction < 1.0:
        raise LayerSpecError(f"prune_fraction {prune_fraction} not in [0, 1)")
    if layers[0].type != "input":
        raise LayerSpecError(f"layer 0 ({layers[0].type}): first layer must be an input layer")

    maps: dict[str, _Map] = {}
    input_ids: list[int] = []
    thresholds: dict[int, int] = {}
    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []
    next_id = 0
    prev: str | None = None

    def allocate(shape: tuple[int, int, int], layer: _Layer) -> np.ndarray:
        nonlocal next_id
        size = int(np.prod(shape))
        ids = np.arange(next_id, next_id + size, dtype=np.int64).reshape(shape)
        next_id += size
        thr = layer.threshold or threshold
        thresholds.update((int(i), thr) for i in ids.ravel())
        return ids

    for idx, layer in enumerate(layers):
        label = layer.name or f"layer{idx}"
        where = f"layer {idx} ({layer.type})"
        if label in maps:
            raise LayerSpecError(f"{where}: duplicate layer name {label!r}")
        refs = layer.inputs if layer.inputs is not None else ([prev] if prev else [])
        if len(set(refs)) != len(refs):
            raise LayerSpecError(f"{where}: repeated input reference")
        missing = [r for r in refs if r not in maps]
        if missing:
            raise LayerSpecError(f"{where}: unknown input layer {missing[0]!r}")
        srcs = [maps[r] for r in refs]

        if isinstance(layer, InputLayer):
            ids = allocate((layer.channels, layer.height, layer.width), layer)
            input_ids.extend(int(i) for i in ids.ravel())
        elif isinstance(layer, (ConvLayer, PoolLayer, DenseLayer)):
            if len(srcs) != 1:
                raise LayerSpecError(f"{where}: expects exactly one input, got {len(srcs)}")
            src = srcs[0].ids
            c, h, w = src.shape
            if isinstance(layer, ConvLayer):
                ho = _out_dim(h, layer.kernel, layer.stride, layer.padding)
                wo = _out_dim(w, layer.kernel, layer.stride, layer.padding)
                if ho < 1 or wo < 1:
                    raise LayerSpecError(
                        f"{where}: kernel {layer.kernel} larger than input {h}x{w}"
                    )
                ids = allocate((layer.channels, ho, wo), layer)
                for s, d in _conv_pairs(src, ids, layer.kernel, layer.stride, layer.padding):
                    src_parts.append(s)
                    dst_parts.append(d)
            elif isinstance(layer, PoolLayer):
                stride = layer.stride or layer.kernel
                ho, wo = _out_dim(h, layer.kernel, stride, 0), _out_dim(w, layer.kernel, stride, 0)
                if ho < 1 or wo < 1:
                    raise LayerSpecError(
                        f"{where}: pool {layer.kernel} larger than input {h}x{w}"
                    )
                ids = allocate((c, ho, wo), layer)
                for s, d in _pool_pairs(src, ids, layer.kernel, stride):
                    src_parts.append(s)
                    dst_parts.append(d)
            else:
                ids = allocate((layer.units, 1, 1), layer)
                flat_src, flat_dst = src.ravel(), ids.ravel()
                src_parts.append(np.repeat(flat_src, flat_dst.size))
                dst_parts.append(np.tile(flat_dst, flat_src.size))
        elif isinstance(layer, ConcatLayer):
            if not srcs:
                raise LayerSpecError(f"{where}: concat needs at least one input")
            spatial = {m.shape[1:] for m in srcs}
            if len(spatial) != 1:
                raise LayerSpecError(
                    f"{where}: concat inputs differ in spatial size {sorted(spatial)}"
                )
            ids = np.concatenate([m.ids for m in srcs], axis=0)
        else:
            if len(srcs) < 2:
                raise LayerSpecError(f"{where}: add needs at least two inputs")
            shapes = {m.shape for m in srcs}
            if len(shapes) != 1:
                raise LayerSpecError(f"{where}: add inputs differ in shape {sorted(shapes)}")
            ids = allocate(srcs[0].shape, layer)
            for m in srcs:
                src_parts.append(m.ids.ravel())
                dst_parts.append(ids.ravel())
        maps[label] = _Map(ids)
        prev = label

    if not src_parts:
        raise LayerSpecError("network has no computing layer")

    src_all = np.concatenate(src_parts)
    dst_all = np.concatenate(dst_parts)
    order = np.lexsort((dst_all, src_all))
    src_all, dst_all = src_all[order], dst_all[order]
    n = src_all.size

    rng = np.random.default_rng(seed)
    w = rng.normal(loc=weight_mean, scale=1.0, size=n)
    keep = np.ones(n, dtype=bool)
    pruned = int(math.floor(prune_fraction * n))
    if pruned:
        keep[np.lexsort((np.arange(n), np.abs(w)))[:pruned]] = False
    lo, hi = weight_range(weight_bits)
    q = np.clip(np.rint(w), lo, hi).astype(np.int64)
    q = np.where(q == 0, np.where(w >= 0, 1, -1), q)

    synapses = [
        Synapse(src=int(s), dst=int(d), weight=int(v))
        for s, d, v in zip(src_all[keep], dst_all[keep], q[keep])
    ]
    has_out = {s.src for s in synapses}
    inputs = set(input_ids)
    neurons = []
    for nid in range(next_id):
        if nid in inputs:
            kind = NeuronKind.INPUT
        elif nid not in has_out:
            kind = NeuronKind.OUTPUT
        else:
            kind = NeuronKind.HIDDEN
        neurons.append(Neuron(id=nid, kind=kind, threshold=thresholds[nid]))

    g = SdcnnGraph(name=name, weight_bits=weight_bits, neurons=neurons, synapses=synapses)
    log.info(
        "generated %s: %d neurons, %d synapses (%d pruned)", name, next_id, len(synapses), pruned
    )
    return g


def load_workload(path: Path) -> Workload:
    try:
        return Workload(**json.loads(Path(path).read_text(encoding="utf-8")))
    except json.JSONDecodeError as exc:
        raise LayerSpecError(f"malformed workload file {path}: {exc}") from exc
    except ValidationError as exc:
        raise LayerSpecError("; ".join(str(e["msg"]) for e in exc.errors())) from exc


def build_workload(w: Workload) -> SdcnnGraph:
    return generate_network(
        w.layers,
        w.prune_fraction,
        w.seed,
        name=w.name,
        threshold=w.threshold,
        weight_bits=w.weight_bits,
        weight_mean=w.weight_mean,
    )
