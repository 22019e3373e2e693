"""Core geometries, backend profiles and palettes."""

from __future__ import annotations

from enum import Enum
from typing import Literal

from pydantic import BaseModel, Field, root_validator

BASELINE_GEOMETRY = (256, 64, 16)
BASELINE_SYNAPSES = 38_000


def full_connectivity(l2: int, l1: int, l0: int) -> int:
    """Synapses of fully programmable l2->l1, l1->l0 and l2->l0 blocks."""
    return l2 * l1 + l1 * l0 + l2 * l0


SYNAPSE_MULTIPLICITY = BASELINE_SYNAPSES / full_connectivity(*BASELINE_GEOMETRY)


class MemoryModel(str, Enum):
    INTEGRATED = "integrated"
    OFFCHIP = "offchip"


class Backend(str, Enum):
    MUBRAIN = "mubrain"
    DYNAPS = "dynaps"
    LOIHI = "loihi"


class LayerSizes(BaseModel):
    """Occupancy of one sub-network, as checked against a core."""

    l2: int = Field(0, ge=0)
    l1: int = Field(0, ge=0)
    l0: int = Field(0, ge=0)
    synapses: int = Field(0, ge=0)

    class Config:
        frozen = True

    @property
    def neurons(self) -> int:
        return self.l2 + self.l1 + self.l0

    def __add__(self, other: LayerSizes) -> LayerSizes:
        return LayerSizes(
            l2=self.l2 + other.l2,
            l1=self.l1 + other.l1,
            l0=self.l0 + other.l0,
            synapses=self.synapses + other.synapses,
        )


class CoreConfig(BaseModel):
    name: str
    l2_capacity: int = Field(..., ge=0)
    l1_capacity: int = Field(..., ge=1)
    l0_capacity: int = Field(..., ge=1)
    layers: Literal[2, 3] = 3
    neuron_capacity: int = 0
    synapse_capacity: int = 0
    memory_model: MemoryModel = MemoryModel.INTEGRATED

    class Config:
        frozen = True

    @root_validator(skip_on_failure=True)
    def _derive(cls, values: dict) -> dict:
        if values["layers"] == 3 and values["l2_capacity"] < 1:
            raise ValueError(f"core {values['name']}: three-layer core needs l2_capacity >= 1")
        if values["layers"] == 2 and values["l2_capacity"] != 0:
            raise ValueError(f"core {values['name']}: two-layer core has no l2 layer")
        if values["neuron_capacity"] <= 0:
            values["neuron_capacity"] = (
                values["l2_capacity"] + values["l1_capacity"] + values["l0_capacity"]
            )
        if values["synapse_capacity"] <= 0:
            values["synapse_capacity"] = round(
                SYNAPSE_MULTIPLICITY
                * full_connectivity(
                    values["l2_capacity"], values["l1_capacity"], values["l0_capacity"]
                )
            )
        return values

    @property
    def geometry(self) -> str:
        if self.layers == 2:
            return f"{self.l1_capacity}x{self.l0_capacity}"
        return f"{self.l2_capacity}x{self.l1_capacity}x{self.l0_capacity}"

    def fits(self, s: LayerSizes) -> bool:
        return (
            s.l2 <= self.l2_capacity
            and s.l1 <= self.l1_capacity
            and s.l0 <= self.l0_capacity
            and s.neurons <= self.neuron_capacity
            and s.synapses <= self.synapse_capacity
        )


def mubrain_config(
    name: str, l2: int, l1: int, l0: int, multiplicity: float | None = None
) -> CoreConfig:
    synapses = 0
    if multiplicity is not None:
        synapses = round(multiplicity * full_connectivity(l2, l1, l0))
    return CoreConfig(
        name=name, l2_capacity=l2, l1_capacity=l1, l0_capacity=l0, synapse_capacity=synapses
    )


LITTLE_1 = mubrain_config("little-1", 256, 64, 16)
LITTLE_2 = mubrain_config("little-2", 1024, 256, 16)
BIG_1 = mubrain_config("big-1", 4096, 1024, 16)
BIG_2 = mubrain_config("big-2", 16384, 4096, 16)
PRESETS = (LITTLE_1, LITTLE_2, BIG_1, BIG_2)

INTERMEDIATE = (
    mubrain_config("mid-1", 512, 128, 16),
    mubrain_config("mid-2", 768, 192, 16),
    mubrain_config("mid-3", 2048, 512, 16),
    mubrain_config("mid-4", 8192, 2048, 16),
)

BASELINE = mubrain_config("baseline", *BASELINE_GEOMETRY)


def make_core_profile(kind: Backend | str) -> CoreConfig:
    """Single-core profile of a backend: the baseline µBrain, a DYNAPs or a Loihi core."""
    kind = Backend(kind)
    if kind is Backend.MUBRAIN:
        return BASELINE
    if kind is Backend.DYNAPS:
        return CoreConfig(
            name="dynaps",
            l2_capacity=0,
            l1_capacity=256,
            l0_capacity=256,
            layers=2,
            neuron_capacity=256,
            synapse_capacity=16_384,
        )
    return CoreConfig(
        name="loihi",
        l2_capacity=0,
        l1_capacity=130_000,
        l0_capacity=130_000,
        layers=2,
        neuron_capacity=130_000,
        synapse_capacity=130_000_000,
        memory_model=MemoryModel.OFFCHIP,
    )


def custom_config(l1_max: int, l2_max: int, l0: int = 16, name: str = "custom") -> CoreConfig:
    """Fully-custom core sized to a workload's largest L1/L2 neighbourhood.

    A sub-network grown from one output holds at most L1 neurons (relays
    included) in l1 and at most L2 in l2, each with at most L1 inputs. Port
    relays for inbound spikes add up to L1 more to l2.
    """
    l1 = max(l1_max, 1)
    l2 = l2_max + l1
    floor = l2 * l1 + l1 * l1 + 2 * l1
    c = mubrain_config(name, l2, l1, l0)
    if c.synapse_capacity >= floor:
        return c
    return CoreConfig(
        name=name, l2_capacity=l2, l1_capacity=l1, l0_capacity=l0, synapse_capacity=floor
    )


def backend_palette(kind: Backend | str, mubrain: tuple[CoreConfig, ...] = PRESETS):
    """Palette the compiler uses for *kind*: the µBrain palette or the single backend core."""
    kind = Backend(kind)
    return mubrain if kind is Backend.MUBRAIN else (make_core_profile(kind),)
