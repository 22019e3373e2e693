from src.hw.config import HardwareConfig, load_hardware
from src.hw.cores import (
    Backend,
    CoreConfig,
    LayerSizes,
    MemoryModel,
    backend_palette,
    custom_config,
    make_core_profile,
)
from src.hw.cost import CostModel, area, dynamic_energy, fit_config, static_power
from src.hw.platform import HardwarePlatform, build_platform

__all__ = [
    "Backend",
    "CoreConfig",
    "CostModel",
    "HardwareConfig",
    "HardwarePlatform",
    "LayerSizes",
    "MemoryModel",
    "area",
    "backend_palette",
    "build_platform",
    "custom_config",
    "dynamic_energy",
    "fit_config",
    "load_hardware",
    "make_core_profile",
    "static_power",
]
