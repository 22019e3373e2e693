"""Input spike trains.

A stimulus is a batch of images; each image maps input neuron ids to the
sorted spike times (integer ps, relative to the image start) injected there.
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, validator

from src.graph.model import SdcnnGraph


class Stimulus(BaseModel):
    images: tuple[dict[int, tuple[int, ...]], ...] = ()

    class Config:
        frozen = True

    @validator("images", each_item=True)
    def _sort_times(cls, image: dict[int, tuple[int, ...]]) -> dict[int, tuple[int, ...]]:
        out: dict[int, tuple[int, ...]] = {}
        for nid in sorted(image):
            times = tuple(sorted(image[nid]))
            if times and times[0] < 0:
                raise ValueError(f"negative spike time on input {nid}")
            out[nid] = times
        return out

    def __len__(self) -> int:
        return len(self.images)

    @property
    def spike_count(self) -> int:
        return sum(len(t) for image in self.images for t in image.values())

    def repeat(self, times: int) -> Stimulus:
        return Stimulus(images=self.images * times)


def make_stimulus(
    g: SdcnnGraph,
    images: int,
    spikes_per_input: int,
    window_ps: int,
    seed: int = 0,
) -> Stimulus:
    """Seeded Poisson-like trains: Poisson spike counts, uniform distinct times."""
    rng = np.random.default_rng(seed)
    inputs = g.inputs()
    batch = []
    for _ in range(images):
        image: dict[int, tuple[int, ...]] = {}
        for nid in inputs:
            k = min(int(rng.poisson(spikes_per_input)), window_ps)
            if k == 0:
                continue
            times = rng.choice(window_ps, size=k, replace=False)
            image[nid] = tuple(int(t) for t in np.sort(times))
        batch.append(image)
    return Stimulus(images=tuple(batch))
