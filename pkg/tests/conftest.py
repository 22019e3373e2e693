import sys
from pathlib import Path

import numpy as np
import pytest

# ensure project root is on the import path
ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from src.common.config import Settings  # noqa: E402
from src.graph.model import Neuron, SdcnnGraph, Synapse  # noqa: E402
from src.hw.config import HardwareConfig  # noqa: E402
from src.hw.cores import LITTLE_1  # noqa: E402
from src.sentryc.dfg import Channel, DataflowGraph, SubNetwork  # noqa: E402


def make_graph(edges, n=None, *, threshold=1, weights=None, weight_bits=2, name="test"):
    """Graph over ids 0..n-1; *threshold* is an int or an id -> threshold map."""
    n = n if n is not None else max((max(e) for e in edges), default=0) + 1
    weights = weights or {}
    neurons = [
        Neuron(id=i, threshold=threshold.get(i, 1) if isinstance(threshold, dict) else threshold)
        for i in range(n)
    ]
    synapses = [Synapse(src=a, dst=b, weight=weights.get((a, b), 1)) for a, b in edges]
    return SdcnnGraph(name=name, weight_bits=weight_bits, neurons=neurons, synapses=synapses)


def random_dag(rng, n, p=0.15):
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    weights = {e: int(rng.choice([-1, 1, 1])) for e in edges}
    thresholds = {i: int(rng.integers(1, 3)) for i in range(n)}
    return make_graph(edges, n, threshold=thresholds, weights=weights, name=f"dag{n}")


def make_dfg(times, edges, spikes=1):
    """Profiled dataflow graph with one neuron per sub-network."""
    subnets = [SubNetwork(id=i, l0=(i,), assigned_config=LITTLE_1) for i in range(len(times))]
    channels = [
        Channel(
            id=k,
            src_subnet=a,
            dst_subnet=b,
            synapses=(Synapse(src=a, dst=b, weight=1),),
            profiled_spike_count=spikes,
        )
        for k, (a, b) in enumerate(sorted(edges))
    ]
    return DataflowGraph(
        name="synthetic",
        neurons=tuple(Neuron(id=i, threshold=1) for i in range(len(times))),
        subnets=tuple(subnets),
        channels=tuple(channels),
        exec_times=tuple(times),
        profiled_images=1,
    )


FIG7A_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (3, 7)]

TINY_LAYERS = [
    {"type": "input", "height": 4, "width": 4},
    {"type": "conv", "channels": 2, "kernel": 3},
    {"type": "dense", "units": 3},
]


@pytest.fixture
def hw():
    return HardwareConfig()


@pytest.fixture
def settings():
    return Settings()


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def chain7():
    return make_graph([(i, i + 1) for i in range(6)], name="chain7")


@pytest.fixture
def diamond():
    return make_graph([(0, 1), (0, 2), (1, 3), (2, 3)], name="diamond")


@pytest.fixture
def fig7a():
    return make_graph(FIG7A_EDGES, name="two-output")


@pytest.fixture
def tiny_layers():
    return [dict(layer) for layer in TINY_LAYERS]
