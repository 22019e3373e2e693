from src.sentryc.compiler import compile_graph, graph_hash
from src.sentryc.dfg import Channel, DataflowGraph, Relay, SubNetwork, check_dataflow_graph
from src.sentryc.io import dfg_from_dict, dfg_hash, dfg_to_dict, load_dfg, save_dfg
from src.sentryc.merge import merge_cost, plan_merges
from src.sentryc.partition import (
    LARGE,
    create_subnet,
    index_neurons,
    insert_relays,
    longest_path_distances,
)
from src.sentryc.profile import profile_channels

__all__ = [
    "LARGE",
    "Channel",
    "DataflowGraph",
    "Relay",
    "SubNetwork",
    "check_dataflow_graph",
    "compile_graph",
    "create_subnet",
    "dfg_from_dict",
    "dfg_hash",
    "dfg_to_dict",
    "graph_hash",
    "index_neurons",
    "insert_relays",
    "load_dfg",
    "longest_path_distances",
    "merge_cost",
    "plan_merges",
    "profile_channels",
    "save_dfg",
]
