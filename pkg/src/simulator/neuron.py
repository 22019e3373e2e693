"""Integrate-and-fire neuron state machine."""

from __future__ import annotations

from dataclasses import dataclass

from src.common.config import SimulatorConfig


@dataclass
class NeuronState:
    threshold: int
    accumulator: int = 0
    last_update: int = 0

    def integrate(self, weight: int, time: int, cfg: SimulatorConfig) -> bool:
        """Add one weighted input spike; return True when the neuron fires."""
        self.last_update = time
        self.accumulator += weight
        if cfg.saturate_at_zero and self.accumulator < 0:
            self.accumulator = 0
        if self.accumulator < self.threshold:
            return False
        if cfg.reset_to_zero:
            self.accumulator = 0
        else:
            self.accumulator -= self.threshold
        return True
