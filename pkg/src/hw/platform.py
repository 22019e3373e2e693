from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING, Literal

from pydantic import BaseModel, root_validator

from src.hw.cores import CoreConfig

if TYPE_CHECKING:
    from src.sentryc.dfg import DataflowGraph


class HardwarePlatform(BaseModel):
    """Instantiated cores plus the interconnect they talk over."""

    cores: tuple[tuple[int, CoreConfig], ...]
    interconnect: Literal["segbus", "noc"] = "segbus"
    config_palette: tuple[CoreConfig, ...]

    class Config:
        frozen = True

    @root_validator(skip_on_failure=True)
    def _check(cls, values: dict) -> dict:
        ids = [cid for cid, _ in values["cores"]]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate core id")
        names = {c.name for c in values["config_palette"]}
        for cid, cfg in values["cores"]:
            if cfg.name not in names:
                raise ValueError(f"core {cid} uses {cfg.name}, which is not in the palette")
        return values

    def config(self, core_id: int) -> CoreConfig:
        return dict(self.cores)[core_id]


def build_platform(
    dfg: DataflowGraph,
    palette: Sequence[CoreConfig],
    interconnect: Literal["segbus", "noc"] = "segbus",
) -> HardwarePlatform:
    """One core per sub-network, core id equal to the sub-network id."""
    by_name = {c.name: c for c in palette}
    cores = tuple((s.id, by_name.get(s.config_name) or s.assigned_config) for s in dfg.subnets)
    return HardwarePlatform(cores=cores, interconnect=interconnect, config_palette=tuple(palette))
