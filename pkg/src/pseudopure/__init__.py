"""Pseudo-pure state preparation with controlled-transfer gates.

Population-space simulation of controlled-rotation-plus-crush gates, exact
two-qubit angle solutions, exhaustive network searches for three qubits,
asymptotic (repeated) networks and a simple relaxation model.
"""

from pseudopure.errors import (
    DegenerateInitial,
    IndexOutOfRange,
    Infeasible,
    NonDiagonalInput,
    OptimizerFailure,
    UnsupportedSpec,
)
from pseudopure.statemodel import (
    PopulationState,
    epsilon,
    pseudo_pure_target,
    thermal_state,
)
from pseudopure.gatekernel import (
    GateNetwork,
    TransferGate,
    apply_gate,
    apply_network,
    epsilon_trace,
)

__all__ = [
    "DegenerateInitial",
    "GateNetwork",
    "IndexOutOfRange",
    "Infeasible",
    "NonDiagonalInput",
    "OptimizerFailure",
    "PopulationState",
    "TransferGate",
    "UnsupportedSpec",
    "apply_gate",
    "apply_network",
    "epsilon",
    "epsilon_trace",
    "pseudo_pure_target",
    "thermal_state",
]
