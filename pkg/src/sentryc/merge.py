"""Area/power driven merging of sub-networks."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence

from src.common.errors import NoFitError
from src.hw.cores import CoreConfig, LayerSizes
from src.hw.cost import CostModel, area, fit_config, static_power
from src.sentryc.dfg import SubNetwork

log = logging.getLogger(__name__)

AREA_WEIGHT = 0.5


def _sizes(s: SubNetwork | LayerSizes) -> LayerSizes:
    return s.sizes if isinstance(s, SubNetwork) else s


def _config(s: SubNetwork | LayerSizes, palette: Sequence[CoreConfig], m: CostModel):
    if isinstance(s, SubNetwork) and s.assigned_config is not None:
        return s.assigned_config
    return fit_config(_sizes(s), palette, m)


def merge_cost(
    si: SubNetwork | LayerSizes,
    sj: SubNetwork | LayerSizes,
    palette: Sequence[CoreConfig],
    m: CostModel,
) -> tuple[float, bool]:
    """Normalised area/power cost of the layer-wise union and whether merging pays off.

    Feasible iff the union fits some palette core and is strictly cheaper in
    both area and static power than keeping the two cores apart.
    """
    union = _sizes(si) + _sizes(sj)
    try:
        cu = fit_config(union, palette, m)
    except NoFitError:
        return math.inf, False
    area_max = max(area(c, m) for c in palette)
    power_max = max(static_power(c, m) for c in palette)
    au, pu = area(cu, m), static_power(cu, m)
    cost = AREA_WEIGHT * au / area_max + (1 - AREA_WEIGHT) * pu / power_max
    ci, cj = _config(si, palette, m), _config(sj, palette, m)
    feasible = au < area(ci, m) + area(cj, m) and pu < static_power(ci, m) + static_power(cj, m)
    return cost, feasible


class _Reachability:
    """Transitive closure of the sub-network DAG as integer bitsets, kept under merges."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]) -> None:
        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[list[int]] = [[] for _ in range(n)]
        for a, b in edges:
            succ[a].append(b)
            pred[b].append(a)
        self.desc = [0] * n
        self.anc = [0] * n
        # edges always run from a later-created sub-network to an earlier one
        for i in range(n):
            for k in succ[i]:
                self.desc[i] |= self.desc[k] | (1 << k)
        for i in reversed(range(n)):
            for k in pred[i]:
                self.anc[i] |= self.anc[k] | (1 << k)

    def related(self, a: int, b: int) -> bool:
        return bool((self.desc[a] >> b) & 1 or (self.desc[b] >> a) & 1)

    def merge(self, keep: int, gone: int) -> None:
        kb, gb = 1 << keep, 1 << gone
        down = (self.desc[keep] | self.desc[gone]) & ~(kb | gb)
        up = (self.anc[keep] | self.anc[gone]) & ~(kb | gb)
        for x in range(len(self.desc)):
            if self.desc[x] & gb:
                self.desc[x] = (self.desc[x] & ~gb) | kb
            if self.anc[x] & gb:
                self.anc[x] = (self.anc[x] & ~gb) | kb
        for x in _bits(up):
            self.desc[x] |= down | kb
        for y in _bits(down):
            self.anc[y] |= up | kb
        self.desc[keep], self.anc[keep] = down, up
        self.desc[gone] = self.anc[gone] = 0


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def plan_merges(
    subnets: Sequence[SubNetwork],
    edges: Iterable[tuple[int, int]],
    palette: Sequence[CoreConfig],
    m: CostModel,
) -> list[list[int]]:
    """Group sub-network indices (creation order) by the minimum-cost merge rule.

    Each sub-network, in creation order, joins the cheapest earlier group it
    is unrelated to and can legally merge with (lowest id on ties); otherwise
    it starts a group of its own.
    """
    reach = _Reachability(len(subnets), edges)
    groups: dict[int, list[int]] = {}
    sizes: dict[int, LayerSizes] = {}
    for idx, s in enumerate(subnets):
        best: tuple[float, int] | None = None
        for label in groups:
            if reach.related(label, idx):
                continue
            cost, feasible = merge_cost(sizes[label], s, palette, m)
            if feasible and (best is None or (cost, label) < best):
                best = (cost, label)
        if best is None:
            groups[idx] = [idx]
            sizes[idx] = s.sizes
            continue
        label = best[1]
        groups[label].append(idx)
        sizes[label] = sizes[label] + s.sizes
        reach.merge(label, idx)
        log.debug("merged sub-network %d into group %d (cost %.4f)", idx, label, best[0])
    log.info("merge pass: %d sub-networks -> %d cores", len(subnets), len(groups))
    return list(groups.values())
