from __future__ import annotations

import os
from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, Field

CONFIG_PATH = Path(os.environ.get("SENTRYOS_SETTINGS", "configs/settings.yml"))


class GraphConfig(BaseModel):
    default_threshold: int = Field(64, ge=1)
    weight_bits: int = Field(2, ge=2, le=16)
    weight_mean: float = 0.5


class CompilerConfig(BaseModel):
    relay_policy: Literal["always", "programmable"] = "always"
    merge: bool = True


class SimulatorConfig(BaseModel):
    neuron_delay_ps: int = Field(1000, ge=1)
    saturate_at_zero: bool = True
    reset_to_zero: bool = True


class SchedulerConfig(BaseModel):
    settle_rounds: int = Field(8, ge=2)
    max_iterations: int = Field(100_000, ge=10)


class ExperimentConfig(BaseModel):
    workloads_dir: Path = Path("configs/workloads")
    batch_size: int = Field(8, ge=1)
    images: int = Field(4, ge=1)
    spikes_per_input: int = Field(3, ge=0)
    window_ps: int = Field(20_000, ge=1)
    workers: int = Field(4, ge=1)


class Settings(BaseModel):
    graph: GraphConfig = Field(default_factory=GraphConfig)
    compiler: CompilerConfig = Field(default_factory=CompilerConfig)
    simulator: SimulatorConfig = Field(default_factory=SimulatorConfig)
    scheduler: SchedulerConfig = Field(default_factory=SchedulerConfig)
    experiments: ExperimentConfig = Field(default_factory=ExperimentConfig)

    class Config:
        extra = "allow"


def load_settings(path: Path = CONFIG_PATH) -> Settings:
    if not path.exists():
        return Settings()
    data = yaml.safe_load(path.read_text()) or {}
    return Settings(**data)
