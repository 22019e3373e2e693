"""Hardware configuration file: palettes, cost model, timing and interconnect constants."""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any

from jsonschema import ValidationError, validate
from pydantic import BaseModel, Field

from src.common.errors import CalibrationError
from src.hw.cores import INTERMEDIATE, PRESETS, CoreConfig, custom_config, mubrain_config
from src.hw.cost import OFFCHIP_ENERGY_PJ, CostModel, check_calibration

log = logging.getLogger(__name__)

HARDWARE_PATH = Path(os.environ.get("SENTRYOS_HARDWARE", "configs/hardware.json"))

_GEOMETRY = {
    "type": "object",
    "required": ["name", "l2", "l1", "l0"],
    "properties": {
        "name": {"type": "string"},
        "l2": {"type": "integer", "minimum": 1},
        "l1": {"type": "integer", "minimum": 1},
        "l0": {"type": "integer", "minimum": 1},
    },
}

HARDWARE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["palette", "cost_model", "interconnect"],
    "properties": {
        "palette": {"type": "array", "minItems": 4, "maxItems": 4, "items": _GEOMETRY},
        "extra_configs": {"type": "array", "maxItems": 4, "items": _GEOMETRY},
        "cost_model": {
            "type": "object",
            "properties": {
                "synapse_share": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "static_power_uw": {"type": "number", "exclusiveMinimum": 0},
                "area_um2": {"type": "number", "exclusiveMinimum": 0},
                "dynamic_energy_per_spike_pj": {"type": "number", "minimum": 0},
                "offchip_energy_per_spike_pj": {"type": "number", "minimum": 0},
            },
        },
        "timing": {"type": "object"},
        "interconnect": {
            "type": "object",
            "properties": {"segbus": {"type": "object"}, "noc": {"type": "object"}},
        },
    },
}


class TimingConfig(BaseModel):
    alpha_ps_per_spike: int = Field(10, ge=0)
    beta_ps: int = Field(2000, ge=0)


class SegbusConstants(BaseModel):
    segment_energy_pj: float = Field(0.1, ge=0)
    segment_latency_ps: int = Field(50, ge=0)
    segment_length_um: float = Field(100.0, gt=0)


class NocConstants(BaseModel):
    link_energy_pj: float = Field(0.5, ge=0)
    router_energy_pj: float = Field(1.5, ge=0)
    link_latency_ps: int = Field(100, ge=0)
    router_latency_ps: int = Field(500, ge=0)

    @property
    def hop_energy_pj(self) -> float:
        return self.link_energy_pj + self.router_energy_pj

    @property
    def hop_latency_ps(self) -> int:
        return self.link_latency_ps + self.router_latency_ps


class InterconnectConfig(BaseModel):
    segbus: SegbusConstants = Field(default_factory=SegbusConstants)
    noc: NocConstants = Field(default_factory=NocConstants)


class HardwareConfig(BaseModel):
    cost_model: CostModel = Field(default_factory=CostModel.calibrated)
    presets: tuple[CoreConfig, ...] = PRESETS
    extra_configs: tuple[CoreConfig, ...] = INTERMEDIATE
    timing: TimingConfig = Field(default_factory=TimingConfig)
    interconnect: InterconnectConfig = Field(default_factory=InterconnectConfig)

    def palettes(self) -> dict[str, tuple[CoreConfig, ...]]:
        """Named palettes of 1, 2, 4 and 8 configurations."""
        presets = self.presets
        eight = tuple(sorted(presets + self.extra_configs, key=lambda c: c.neuron_capacity))
        one = (presets[-1],)
        return {
            "one": one,
            "conservative": one,
            "two": (presets[1], presets[3]),
            "four": presets,
            "eight": eight,
        }

    def palette(self, name: str) -> tuple[CoreConfig, ...]:
        table = self.palettes()
        if name not in table:
            raise KeyError(f"unknown palette {name!r}; expected one of {sorted(table)}")
        return table[name]

    def custom_palette(self, l1_max: int, l2_max: int) -> tuple[CoreConfig, ...]:
        l0 = self.presets[0].l0_capacity
        return (custom_config(l1_max, l2_max, l0),)


def hardware_from_dict(data: dict[str, Any]) -> HardwareConfig:
    try:
        validate(instance=data, schema=HARDWARE_SCHEMA)
    except ValidationError as exc:
        log.error("hardware schema validation failed: %s", exc.message)
        raise CalibrationError(f"invalid hardware config: {exc.message}") from exc
    cm = data["cost_model"]
    model = CostModel.calibrated(
        synapse_share=cm.get("synapse_share", 0.9),
        static_power_uw=cm.get("static_power_uw", 40.3),
        area_um2=cm.get("area_um2", 1_000_000.0),
        dynamic_energy_per_spike=cm.get("dynamic_energy_per_spike_pj", 26.0),
        offchip_energy_per_spike=cm.get("offchip_energy_per_spike_pj", OFFCHIP_ENERGY_PJ),
    )
    check_calibration(model)
    hw = HardwareConfig(
        cost_model=model,
        presets=tuple(
            mubrain_config(p["name"], p["l2"], p["l1"], p["l0"]) for p in data["palette"]
        ),
        extra_configs=tuple(
            mubrain_config(p["name"], p["l2"], p["l1"], p["l0"])
            for p in data.get("extra_configs", [])
        ),
        timing=TimingConfig(**data.get("timing", {})),
        interconnect=InterconnectConfig(**data["interconnect"]),
    )
    return hw


def load_hardware(path: Path = HARDWARE_PATH) -> HardwareConfig:
    """Read the hardware file; a missing file yields the built-in calibrated defaults."""
    path = Path(path)
    if not path.exists():
        log.warning("hardware config %s not found, using built-in defaults", path)
        return HardwareConfig()
    hw = hardware_from_dict(json.loads(path.read_text(encoding="utf-8")))
    log.info("loaded hardware config %s (%d presets)", path, len(hw.presets))
    return hw
