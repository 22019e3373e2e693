from src.segbus.cost import InterconnectCost, NocDescriptor, build_noc, interconnect_cost
from src.segbus.planner import (
    BusProgram,
    LanePlan,
    Route,
    check_conflict_free,
    min_lanes,
    plan_lanes,
    program_switches,
)
from src.segbus.topology import BusTopology, place_cores

__all__ = [
    "BusProgram",
    "BusTopology",
    "InterconnectCost",
    "LanePlan",
    "NocDescriptor",
    "Route",
    "build_noc",
    "check_conflict_free",
    "interconnect_cost",
    "min_lanes",
    "place_cores",
    "plan_lanes",
    "program_switches",
]
