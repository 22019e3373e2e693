from src.graph.generate import Workload, build_workload, generate_network, load_workload
from src.graph.io import load_graph, load_stimulus, save_graph, save_stimulus
from src.graph.model import Neuron, NeuronKind, SdcnnGraph, Synapse
from src.graph.stats import NeighborStats, neighbor_stats
from src.graph.stimulus import Stimulus, make_stimulus

__all__ = [
    "Neuron",
    "NeuronKind",
    "NeighborStats",
    "SdcnnGraph",
    "Stimulus",
    "Synapse",
    "Workload",
    "build_workload",
    "generate_network",
    "load_graph",
    "load_stimulus",
    "load_workload",
    "make_stimulus",
    "neighbor_stats",
    "save_graph",
    "save_stimulus",
]
