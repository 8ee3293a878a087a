"""Closed-form transfer angles for two-qubit pseudo-pure preparation.

Two gates suffice for two qubits: a gate with angle ``theta1`` that partially
averages one population pair, then a ``pi/2`` gate with control and target
swapped that fully averages the other pair. ``theta1`` is chosen so that both
averages land on the same value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from pseudopure.errors import Infeasible
from pseudopure.gatekernel import GateNetwork, TransferGate
from pseudopure.statemodel import EQUAL_TOL, PopulationState, thermal_state


class GateOrder(enum.Enum):
    """Which pair the first gate mixes.

    ``CD_FIRST``: first gate control=1, target=2 (mixes ``c`` and ``d``).
    ``BD_FIRST``: first gate control=2, target=1 (mixes ``b`` and ``d``).
    """

    CD_FIRST = "CDFirst"
    BD_FIRST = "BDFirst"

    @property
    def first_pair(self) -> tuple[int, int]:
        return (1, 2) if self is GateOrder.CD_FIRST else (2, 1)


@dataclass(frozen=True)
class AngleSolution:
    theta1: float
    theta2: float
    order: GateOrder

    def network(self, repetitions: int = 1) -> GateNetwork:
        c, t = self.order.first_pair
        return GateNetwork((TransferGate(c, t, self.theta1), TransferGate(t, c, self.theta2)), repetitions)

    @property
    def degrees(self) -> tuple[float, float]:
        return math.degrees(self.theta1), math.degrees(self.theta2)


def solve_angles(initial: PopulationState, order: GateOrder = GateOrder.CD_FIRST) -> AngleSolution:
    """Exact angles turning a two-qubit population state pseudo-pure.

    Raises
    ------
    Infeasible
        If the required ``cos(theta1)`` lies outside ``[-1, 1]``, or the
        first pair is already equal while the second is not.
    """
    if initial.n_qubits != 2:
        raise ValueError(f"exact solver needs a two-qubit state, got n={initial.n_qubits}")
    a, b, c, d = initial.pops
    if order is GateOrder.BD_FIRST:
        b, c = c, b
    num = 2 * b - (c + d)
    den = 3 * (c - d)
    tol = EQUAL_TOL * max(1.0, float(np.max(np.abs(initial.pops))))
    if abs(den) <= tol:
        if abs(num) <= tol:
            return AngleSolution(math.pi / 2, math.pi / 2, order)
        raise Infeasible(f"{order.value}: first pair is already averaged but the second is not")
    arg = num / den
    if abs(arg) > 1 + 1e-12:
        raise Infeasible(f"{order.value}: cos(theta1) = {arg:.6g} is outside [-1, 1]")
    return AngleSolution(math.acos(min(1.0, max(-1.0, arg))), math.pi / 2, order)


def solve_all(initial: PopulationState) -> dict[GateOrder, AngleSolution | Infeasible]:
    """Try both gate orders; failed orders map to their ``Infeasible`` error."""
    out: dict[GateOrder, AngleSolution | Infeasible] = {}
    for order in GateOrder:
        try:
            out[order] = solve_angles(initial, order)
        except Infeasible as exc:
            out[order] = exc
    return out


def heteronuclear_theta_curve(ratio_min: float, ratio_max: float, steps: int) -> list[tuple[float, float]]:
    """First-gate angle (degrees) against the polarization ratio of spin 1 to spin 2.

    Ratios are spaced geometrically. The first gate targets the more polarized
    spin 1 (``BD_FIRST``), which keeps the problem feasible for every ratio.
    """
    if not (1 <= ratio_min < ratio_max):
        raise ValueError("need 1 <= ratio_min < ratio_max")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    table = []
    for ratio in np.geomspace(ratio_min, ratio_max, steps):
        sol = solve_angles(thermal_state([ratio, 1.0]), GateOrder.BD_FIRST)
        table.append((float(ratio), math.degrees(sol.theta1)))
    return table
