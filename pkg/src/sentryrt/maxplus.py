"""Max-Plus timing analysis of a profiled dataflow graph.

Matrices are float64 numpy arrays with ``-inf`` as the zero element. For end
times ``x`` of one iteration, ``T (x) x`` gives the end times of the next:
``T[i][j]`` is the heaviest path from sub-network j to i counting both
endpoints' execution times, and ``T[i][i] = t_i`` keeps each core sequential.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import networkx as nx
import numpy as np

from src.common.config import SchedulerConfig
from src.common.errors import DivergenceError, ScheduleError
from src.sentryc.dfg import DataflowGraph

log = logging.getLogger(__name__)

NEG_INF = -np.inf


def oplus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.maximum(a, b)


def otimes(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Max-Plus product; vectors are treated as columns."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if b.ndim == 1:
        return np.max(a + b[np.newaxis, :], axis=1)
    return np.max(a[:, :, np.newaxis] + b[np.newaxis, :, :], axis=1)


def identity(n: int) -> np.ndarray:
    out = np.full((n, n), NEG_INF)
    np.fill_diagonal(out, 0.0)
    return out


def timing_matrix_from(times: Sequence[int], edges: Sequence[tuple[int, int]]) -> np.ndarray:
    n = len(times)
    dag = nx.DiGraph()
    dag.add_nodes_from(range(n))
    dag.add_edges_from(edges)
    if not nx.is_directed_acyclic_graph(dag):
        raise ScheduleError("timing graph has a cycle")
    t = np.full((n, n), NEG_INF)
    for i in range(n):
        t[i, i] = times[i]
    # heaviest path j -> i with both endpoints counted, in topological order of i
    for i in nx.lexicographical_topological_sort(dag):
        for p in dag.predecessors(i):
            t[i] = np.maximum(t[i], t[p] + times[i])
    return t


def timing_matrix(dfg: DataflowGraph) -> np.ndarray:
    if not dfg.profiled:
        raise ScheduleError(f"dataflow graph {dfg.name} has no execution times; profile it first")
    edges = sorted({(c.src_subnet, c.dst_subnet) for c in dfg.channels})
    return timing_matrix_from(dfg.exec_times, edges)


def maxplus_evolve(t: np.ndarray, t0: Sequence[float], k: int) -> np.ndarray:
    """End-time vectors of iterations 1..k, one row each."""
    x = np.asarray(t0, dtype=np.float64)
    rows = np.empty((k, len(x)))
    for step in range(k):
        x = otimes(t, x)
        rows[step] = x
    return rows


def steady_state_interval(t: np.ndarray, cfg: SchedulerConfig | None = None) -> float:
    """Maximum cycle mean of *t* by power iteration from the zero vector.

    Stops once the largest per-iteration increment has held for
    ``settle_rounds`` consecutive rounds.
    """
    cfg = cfg or SchedulerConfig()
    n = t.shape[0]
    if n == 0:
        return 0.0
    x = np.zeros(n)
    last: float | None = None
    stable = 0
    for step in range(1, cfg.max_iterations + 1):
        nxt = otimes(t, x)
        inc = float(np.max(nxt - x))
        x = nxt
        if last is not None and inc == last:
            stable += 1
            if stable >= cfg.settle_rounds:
                log.debug("interval %.1f settled after %d iterations", inc, step)
                return inc
        else:
            stable = 0
        last = inc
    raise DivergenceError(f"no steady state after {cfg.max_iterations} iterations")
