"""Discrete-event reference for self-timed batch execution."""

from __future__ import annotations

import heapq
from collections.abc import Sequence

import numpy as np


def self_timed_ends(
    times: Sequence[int],
    edges: Sequence[tuple[int, int]],
    images: int,
    *,
    overlap: bool = True,
) -> np.ndarray:
    """End time of every (image, sub-network), one row per image.

    A sub-network starts image b once its predecessors finished image b and
    its own core finished image b-1. Without overlap, image b waits for the
    whole of image b-1 instead.
    """
    n = len(times)
    succ: list[list[int]] = [[] for _ in range(n)]
    npred = [0] * n
    for a, b in edges:
        succ[a].append(b)
        npred[b] += 1
    ends = np.full((images, n), np.nan)
    waiting = {(b, i): npred[i] + (1 if b else 0) for b in range(images) for i in range(n)}
    ready_at = dict.fromkeys(waiting, 0)
    left = [n] * images
    events: list[tuple[int, int, int]] = [(times[i], 0, i) for i in range(n) if not npred[i]]
    heapq.heapify(events)

    def release(b: int, i: int, t: int) -> None:
        key = (b, i)
        ready_at[key] = max(ready_at[key], t)
        waiting[key] -= 1
        if waiting[key] == 0:
            heapq.heappush(events, (ready_at[key] + times[i], b, i))

    while events:
        t, b, i = heapq.heappop(events)
        ends[b, i] = t
        left[b] -= 1
        for j in succ[i]:
            release(b, j, t)
        if b + 1 == images:
            continue
        if overlap:
            release(b + 1, i, t)
        elif left[b] == 0:
            for j in range(n):
                release(b + 1, j, t)
    return ends
