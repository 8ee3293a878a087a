"""Quick self-test comparing the population kernel with the dense oracle."""

from __future__ import annotations

import math

import numpy as np

from pseudopure.exactsolver import GateOrder, solve_angles
from pseudopure.gatekernel import GateNetwork, TransferGate, apply_gate, apply_network, epsilon_trace
from pseudopure.netsearch import AngleMode, Family, SearchSpec, Topology, asymptotic_survey, group_classes
from pseudopure.refmodel import apply_gate_ref, density_from_pops
from pseudopure.statemodel import PopulationState, epsilon, thermal_state


def random_case(rng: np.random.Generator, n: int) -> tuple[PopulationState, TransferGate]:
    pops = rng.normal(size=2**n)
    control, target = rng.choice(np.arange(1, n + 1), size=2, replace=False)
    return PopulationState(pops), TransferGate(int(control), int(target), float(rng.uniform(0, math.pi)))


def oracle_gap(rng: np.random.Generator, n: int, cases: int, axis: str = "x") -> float:
    worst = 0.0
    for _ in range(cases):
        state, gate = random_case(rng, n)
        ref = np.real(np.diag(apply_gate_ref(density_from_pops(state.pops), gate, axis)))
        worst = max(worst, float(np.max(np.abs(ref - apply_gate(state, gate).pops))))
    return worst


def axis_gap(rng: np.random.Generator, n: int, cases: int) -> float:
    worst = 0.0
    for _ in range(cases):
        state, gate = random_case(rng, n)
        rho = density_from_pops(state.pops)
        worst = max(worst, float(np.max(np.abs(apply_gate_ref(rho, gate, "x") - apply_gate_ref(rho, gate, "y")))))
    return worst


def run_checks(seed: int = 0, cases: int = 1000) -> list[tuple[str, bool, str]]:
    rng = np.random.default_rng(seed)
    out = []
    for n in (2, 3):
        gap = oracle_gap(rng, n, cases)
        out.append((f"oracle equivalence n={n}", gap <= 1e-10, f"max |diff| = {gap:.2e}"))
    gap = axis_gap(rng, 3, 200)
    out.append(("axis independence", gap <= 1e-12, f"max |x - y| = {gap:.2e}"))

    x2 = thermal_state([1, 1])
    sol = solve_angles(x2, GateOrder.CD_FIRST)
    eps = epsilon(apply_network(x2, sol.network()), x2)
    ok = abs(sol.theta1 - math.acos(1 / 3)) <= 1e-9 and eps <= 1e-10
    out.append(("two-qubit exact angles", ok, f"theta1 = {math.degrees(sol.theta1):.4f} deg, eps = {eps:.1e}"))

    naive = GateNetwork.from_specs([(1, 2, math.pi / 2), (2, 1, math.pi / 2)])
    trace = epsilon_trace(x2, naive, 6)
    rel = max(abs(e * 4**r - 1) for r, e in enumerate(trace, start=1))
    out.append(("two-qubit asymptotic 4^-r", rel <= 1e-9, f"max rel err = {rel:.1e}"))

    rows = asymptotic_survey(SearchSpec(Topology.all_pairs(3), 6, AngleMode.HALF_PI, Family.PERMUTATION), 1)
    sizes = sorted(len(g) for g in group_classes([row.eps[0] for row in rows]))
    ok = len(rows) == 120 and sizes[-1] == 68
    out.append(("permutation networks", ok, f"{len(rows)} networks, largest class {sizes[-1]}"))
    return out
