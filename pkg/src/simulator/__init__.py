from src.simulator.direct import DirectResult, simulate_direct
from src.simulator.engine import SpikeTrace, conservation_holds, run_events
from src.simulator.neuron import NeuronState

__all__ = [
    "DirectResult",
    "NeuronState",
    "SpikeTrace",
    "conservation_holds",
    "run_events",
    "simulate_direct",
]
