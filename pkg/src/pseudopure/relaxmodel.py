"""T1 repolarisation and T2 signal loss around controlled-transfer gates.

T1 acts on populations. For each qubit in index order, every pair of basis
states differing only in that qubit keeps its sum while its difference decays
exponentially towards the equilibrium difference of the same pair. This is the
population-space action of generalised amplitude damping, applied qubit by
qubit; the ordering only matters at second order in ``tau / T1``.

T2 does not change the stored populations, because the crush removes the
coherences it would act on. Its effect is tracked as a multiplicative
``deviation_scale`` on the observable signal, charged to the target qubit of
each gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pseudopure.gatekernel import GateNetwork, TransferGate, apply_gate
from pseudopure.statemodel import PopulationState


@dataclass(frozen=True)
class RelaxationParams:
    """Per-qubit relaxation times in seconds; ``math.inf`` disables a channel."""

    t1: tuple[float, ...]
    t2: tuple[float, ...]
    gate_duration: float
    equilibrium: PopulationState

    def __post_init__(self):
        t1 = tuple(float(x) for x in self.t1)
        t2 = tuple(float(x) for x in self.t2)
        n = self.equilibrium.n_qubits
        if len(t1) != n or len(t2) != n:
            raise ValueError(f"need {n} T1 and T2 values, got {len(t1)} and {len(t2)}")
        if any(not (x > 0) for x in t1 + t2):
            raise ValueError("relaxation times must be positive (use inf to disable)")
        if not (self.gate_duration >= 0 and math.isfinite(self.gate_duration)):
            raise ValueError("gate_duration must be finite and >= 0")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)
        object.__setattr__(self, "gate_duration", float(self.gate_duration))

    @classmethod
    def uniform(cls, t1: float, t2: float, gate_duration: float, equilibrium: PopulationState) -> RelaxationParams:
        n = equilibrium.n_qubits
        return cls((t1,) * n, (t2,) * n, gate_duration, equilibrium)

    @property
    def n_qubits(self) -> int:
        return self.equilibrium.n_qubits


def _decay(tau: float, t: float) -> float:
    if math.isinf(t):
        return 1.0
    return math.exp(-tau / t)


def apply_t1(state: PopulationState, params: RelaxationParams, tau: float) -> PopulationState:
    if tau < 0:
        raise ValueError("tau must be >= 0")
    n = state.n_qubits
    if n != params.n_qubits:
        raise ValueError("state and equilibrium sizes differ")
    pops = state.pops.copy()
    eq = params.equilibrium.pops
    idx = np.arange(state.dim)
    for q in range(1, n + 1):
        k = _decay(tau, params.t1[q - 1])
        if k == 1.0:
            continue
        mask = 1 << (n - q)
        s0 = idx[(idx & mask) == 0]
        s1 = s0 | mask
        half_sum = (pops[s0] + pops[s1]) / 2
        d_eq = eq[s0] - eq[s1]
        half_diff = (d_eq + (pops[s0] - pops[s1] - d_eq) * k) / 2
        pops[s0] = half_sum + half_diff
        pops[s1] = half_sum - half_diff
    return PopulationState(pops)


def apply_gate_with_relaxation(
    state: PopulationState, gate: TransferGate, params: RelaxationParams
) -> tuple[PopulationState, float]:
    """Ideal gate, then T1 over one gate duration.

    Returns the new state and the T2 signal factor of this gate,
    ``exp(-gate_duration / T2[target])``. Factors from successive gates
    multiply.
    """
    out = apply_gate(state, gate)
    if params.gate_duration > 0:
        out = apply_t1(out, params, params.gate_duration)
    return out, _decay(params.gate_duration, params.t2[gate.target - 1])


def apply_network_with_relaxation(
    state: PopulationState, net: GateNetwork, params: RelaxationParams
) -> tuple[PopulationState, float]:
    scale = 1.0
    for _ in range(net.repetitions):
        for g in net.gates:
            state, f = apply_gate_with_relaxation(state, g, params)
            scale *= f
    return state, scale


def relaxed_trace(
    initial: PopulationState, gates: Sequence[TransferGate], params: RelaxationParams, rounds: int
) -> list[tuple[PopulationState, float]]:
    """State and cumulative signal factor after each pass of ``gates``."""
    net = GateNetwork(tuple(gates))
    state, scale = initial, 1.0
    out = []
    for _ in range(rounds):
        state, f = apply_network_with_relaxation(state, net, params)
        scale *= f
        out.append((state, scale))
    return out
