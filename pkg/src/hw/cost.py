"""Linear area / static-power model and per-spike dynamic energy.

Static power and area scale with *provisioned* synapses and neurons, so a
core pays for capacity it never uses.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

from pydantic import BaseModel, Field

from src.common.errors import CalibrationError, NoFitError
from src.hw.cores import BASELINE, BASELINE_SYNAPSES, CoreConfig, LayerSizes, MemoryModel

log = logging.getLogger(__name__)

BASELINE_STATIC_POWER_UW = 40.3
BASELINE_AREA_UM2 = 1_000_000.0
SPIKE_ENERGY_PJ = 26.0
OFFCHIP_ENERGY_PJ = 60.0
CALIBRATION_TOLERANCE = 1e-9


class CostModel(BaseModel):
    static_power_per_synapse: float = Field(..., gt=0)  # µW / synapse
    static_power_per_neuron: float = Field(..., gt=0)  # µW / neuron
    area_per_synapse: float = Field(..., gt=0)  # µm² / synapse
    area_per_neuron: float = Field(..., gt=0)  # µm² / neuron
    dynamic_energy_per_spike: float = Field(SPIKE_ENERGY_PJ, ge=0)  # pJ
    offchip_energy_per_spike: float = Field(0.0, ge=0)  # pJ, off-chip memory cores only

    class Config:
        frozen = True

    @classmethod
    def calibrated(
        cls,
        synapse_share: float = 0.9,
        static_power_uw: float = BASELINE_STATIC_POWER_UW,
        area_um2: float = BASELINE_AREA_UM2,
        dynamic_energy_per_spike: float = SPIKE_ENERGY_PJ,
        offchip_energy_per_spike: float = OFFCHIP_ENERGY_PJ,
    ) -> CostModel:
        """Coefficients that put the baseline 336-neuron / 38K-synapse core on target."""
        if not 0.0 < synapse_share < 1.0:
            raise CalibrationError(f"synapse_share {synapse_share} not in (0, 1)")
        neurons = BASELINE.neuron_capacity
        return cls(
            static_power_per_synapse=synapse_share * static_power_uw / BASELINE_SYNAPSES,
            static_power_per_neuron=(1 - synapse_share) * static_power_uw / neurons,
            area_per_synapse=synapse_share * area_um2 / BASELINE_SYNAPSES,
            area_per_neuron=(1 - synapse_share) * area_um2 / neurons,
            dynamic_energy_per_spike=dynamic_energy_per_spike,
            offchip_energy_per_spike=offchip_energy_per_spike,
        )


def _on_core_synapses(c: CoreConfig) -> int:
    return 0 if c.memory_model is MemoryModel.OFFCHIP else c.synapse_capacity


def static_power(c: CoreConfig, m: CostModel) -> float:
    """Static power in µW; off-chip synaptic memory is not part of the core."""
    return m.static_power_per_synapse * _on_core_synapses(c) + m.static_power_per_neuron * (
        c.neuron_capacity
    )


def area(c: CoreConfig, m: CostModel) -> float:
    return m.area_per_synapse * _on_core_synapses(c) + m.area_per_neuron * c.neuron_capacity


def spike_energy(c: CoreConfig, m: CostModel) -> float:
    """pJ charged per spike processed on a core of this kind."""
    if c.memory_model is MemoryModel.OFFCHIP:
        return m.dynamic_energy_per_spike + m.offchip_energy_per_spike
    return m.dynamic_energy_per_spike


def dynamic_energy(spike_count: int, m: CostModel, c: CoreConfig | None = None) -> float:
    if spike_count < 0:
        raise ValueError(f"negative spike count {spike_count}")
    per_spike = m.dynamic_energy_per_spike if c is None else spike_energy(c, m)
    return spike_count * per_spike


def check_calibration(m: CostModel) -> None:
    got = static_power(BASELINE, m)
    if abs(got - BASELINE_STATIC_POWER_UW) > CALIBRATION_TOLERANCE * BASELINE_STATIC_POWER_UW:
        raise CalibrationError(
            f"baseline core draws {got!r} uW, expected {BASELINE_STATIC_POWER_UW} uW"
        )
    if m.dynamic_energy_per_spike != SPIKE_ENERGY_PJ:
        raise CalibrationError(
            f"dynamic energy {m.dynamic_energy_per_spike} pJ/spike, expected {SPIKE_ENERGY_PJ}"
        )


def fit_config(
    s: LayerSizes, palette: Sequence[CoreConfig], m: CostModel | None = None
) -> CoreConfig:
    """Cheapest palette member (static power, then palette order) that hosts *s*."""
    if not palette:
        raise NoFitError("empty core palette")
    m = m or CostModel.calibrated()
    best: tuple[float, int] | None = None
    choice: CoreConfig | None = None
    for idx, c in enumerate(palette):
        if not c.fits(s):
            continue
        key = (static_power(c, m), idx)
        if best is None or key < best:
            best, choice = key, c
    if choice is None:
        largest = max(palette, key=lambda c: c.neuron_capacity)
        raise NoFitError(
            f"sub-network ({s.l2}x{s.l1}x{s.l0}, {s.synapses} synapses) exceeds every "
            f"core configuration (largest {largest.name} {largest.geometry})"
        )
    return choice
