"""Controlled-transfer gates acting on population states.

A controlled-transfer gate is a controlled rotation by ``theta`` followed by a
crush gradient. On a diagonal state it only touches pairs of basis states that
differ in the target bit and have the control bit set: the pair keeps its sum
and its difference is multiplied by ``cos(theta)``. The rotation axis never
enters, so angles are stored folded into ``[0, pi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from pseudopure.errors import IndexOutOfRange
from pseudopure.statemodel import PopulationState, epsilon


def fold_angle(theta: float) -> float:
    """Map any angle onto ``[0, pi]`` without changing ``cos(theta)``."""
    t = math.fmod(float(theta), 2 * math.pi)
    if t < 0:
        t += 2 * math.pi
    if t > math.pi:
        t = 2 * math.pi - t
    return t


@dataclass(frozen=True)
class TransferGate:
    """Controlled-transfer gate; qubits are 1-based, ``theta`` in radians."""

    control: int
    target: int
    theta: float = math.pi / 2

    def __post_init__(self):
        for name in ("control", "target"):
            q = getattr(self, name)
            if int(q) != q or q < 1:
                raise IndexOutOfRange(f"{name} qubit must be a positive integer, got {q!r}")
            object.__setattr__(self, name, int(q))
        if self.control == self.target:
            raise ValueError("control and target must differ")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "theta", fold_angle(self.theta))

    @property
    def pair(self) -> tuple[int, int]:
        return (self.control, self.target)

    @property
    def n_min(self) -> int:
        return max(self.control, self.target)

    def __str__(self):
        return f"{self.control}>{self.target}@{math.degrees(self.theta):.4f}"


@dataclass(frozen=True)
class GateNetwork:
    """Ordered gate list, applied left to right, ``repetitions`` times."""

    gates: tuple[TransferGate, ...]
    repetitions: int = 1

    def __post_init__(self):
        gates = tuple(self.gates)
        if not gates:
            raise ValueError("a network needs at least one gate")
        if int(self.repetitions) != self.repetitions or self.repetitions < 1:
            raise ValueError("repetitions must be an integer >= 1")
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "repetitions", int(self.repetitions))

    @classmethod
    def from_specs(cls, specs: Iterable[tuple[int, int, float]], repetitions: int = 1) -> GateNetwork:
        return cls(tuple(TransferGate(c, t, th) for c, t, th in specs), repetitions)

    @property
    def n_qubits(self) -> int:
        """Smallest register size the network fits in."""
        return max(g.n_min for g in self.gates)

    @property
    def angles(self) -> np.ndarray:
        return np.array([g.theta for g in self.gates])

    def __len__(self):
        return len(self.gates)

    def with_repetitions(self, r: int) -> GateNetwork:
        return GateNetwork(self.gates, r)


@lru_cache(maxsize=None)
def pair_indices(n_qubits: int, control: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs ``(s0, s1)`` mixed by a gate: control bit 1, target bit 0/1."""
    if not (1 <= control <= n_qubits and 1 <= target <= n_qubits):
        raise IndexOutOfRange(f"gate ({control}, {target}) does not fit in {n_qubits} qubits")
    if control == target:
        raise ValueError("control and target must differ")
    idx = np.arange(2**n_qubits)
    cbit = (idx >> (n_qubits - control)) & 1
    tbit = (idx >> (n_qubits - target)) & 1
    s0 = idx[(cbit == 1) & (tbit == 0)]
    s1 = s0 | (1 << (n_qubits - target))
    s0.setflags(write=False)
    s1.setflags(write=False)
    return s0, s1


def transfer(pops: np.ndarray, n_qubits: int, control: int, target: int, cos_theta) -> np.ndarray:
    """Apply one gate to an array of populations (last axis is the basis).

    ``cos_theta`` may be a scalar or broadcast against the leading axes, which
    lets the search evaluate many angle choices at once.
    """
    s0, s1 = pair_indices(n_qubits, control, target)
    out = np.array(pops, dtype=float, copy=True)
    a = out[..., s0]
    b = out[..., s1]
    c = np.asarray(cos_theta, dtype=float)
    if c.ndim:
        c = c[..., None]
    # written as a shift so that cos(theta) == 1 leaves the pair bit-identical
    shift = (a - b) * ((1.0 - c) / 2)
    out[..., s0] = a - shift
    out[..., s1] = b + shift
    return out


def apply_gate(state: PopulationState, gate: TransferGate) -> PopulationState:
    """Population state after one controlled-transfer gate.

    >>> apply_gate(PopulationState([1, 2, 3, 4]), TransferGate(1, 2, math.pi)).pops.tolist()
    [1.0, 2.0, 4.0, 3.0]
    """
    if gate.n_min > state.n_qubits:
        raise IndexOutOfRange(f"gate {gate.pair} does not fit in {state.n_qubits} qubits")
    return PopulationState(
        transfer(state.pops, state.n_qubits, gate.control, gate.target, math.cos(gate.theta))
    )


def run_gates(pops: np.ndarray, n_qubits: int, gates: Sequence[TransferGate], repetitions: int = 1) -> np.ndarray:
    for _ in range(repetitions):
        for g in gates:
            pops = transfer(pops, n_qubits, g.control, g.target, math.cos(g.theta))
    return pops


def _check_fits(state: PopulationState, net: GateNetwork) -> None:
    if net.n_qubits > state.n_qubits:
        raise IndexOutOfRange(
            f"network addresses qubit {net.n_qubits} but the state has {state.n_qubits}"
        )


def apply_network(state: PopulationState, net: GateNetwork) -> PopulationState:
    _check_fits(state, net)
    return PopulationState(run_gates(state.pops, state.n_qubits, net.gates, net.repetitions))


def epsilon_trace(initial: PopulationState, net: GateNetwork, r_max: int) -> list[float]:
    """Epsilon after 1, 2, ..., ``r_max`` passes of the network's gate list.

    The network's own ``repetitions`` field is ignored; each pass is one run
    through ``net.gates``.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    _check_fits(initial, net)
    pops = initial.pops
    trace = []
    for _ in range(r_max):
        pops = run_gates(pops, initial.n_qubits, net.gates)
        trace.append(epsilon(PopulationState(pops), initial))
    return trace
