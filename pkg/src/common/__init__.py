from .config import (
    CompilerConfig,
    ExperimentConfig,
    GraphConfig,
    SchedulerConfig,
    Settings,
    SimulatorConfig,
    load_settings,
)
from .errors import InconsistentArtifactError, SentryError

__all__ = [
    "CompilerConfig",
    "ExperimentConfig",
    "GraphConfig",
    "InconsistentArtifactError",
    "SchedulerConfig",
    "SentryError",
    "Settings",
    "SimulatorConfig",
    "load_settings",
]
