import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pseudopure import DegenerateInitial, Infeasible, PopulationState, apply_network, epsilon, thermal_state
from pseudopure.exactsolver import GateOrder, heteronuclear_theta_curve, solve_all, solve_angles

ACOS_THIRD = math.acos(1 / 3)


def test_homonuclear_cd_first(thermal2):
    sol = solve_angles(thermal2, GateOrder.CD_FIRST)
    assert sol.theta1 == pytest.approx(ACOS_THIRD, abs=1e-12)
    assert sol.theta2 == math.pi / 2
    assert math.degrees(sol.theta1) == pytest.approx(70.5, abs=0.05)
    assert epsilon(apply_network(thermal2, sol.network()), thermal2) <= 1e-10


def test_factor_two_bd_first():
    x = PopulationState([3, 1, -1, -3])
    sol = solve_angles(x, GateOrder.BD_FIRST)
    assert sol.degrees == pytest.approx((90.0, 90.0), abs=1e-12)
    assert epsilon(apply_network(x, sol.network()), x) <= 1e-12


def test_infeasible_large_ratio():
    x = thermal_state([10, 1])
    assert x.pops.tolist() == [11, 9, -9, -11]
    with pytest.raises(Infeasible, match="6.333"):
        solve_angles(x, GateOrder.CD_FIRST)
    results = solve_all(x)
    assert isinstance(results[GateOrder.CD_FIRST], Infeasible)
    assert not isinstance(results[GateOrder.BD_FIRST], Infeasible)


def test_degenerate_pair():
    # c == d and 2b == c + d: first pair already averaged
    sol = solve_angles(PopulationState([2, -1, -1, -1]), GateOrder.CD_FIRST)
    assert sol.theta1 == math.pi / 2
    with pytest.raises(Infeasible):
        solve_angles(PopulationState([2, 1, -1.5, -1.5]), GateOrder.CD_FIRST)


def test_wrong_size(thermal3):
    with pytest.raises(ValueError):
        solve_angles(thermal3)


def test_order_pairs():
    assert GateOrder.CD_FIRST.first_pair == (1, 2)
    assert GateOrder.BD_FIRST.first_pair == (2, 1)


def test_curve_limits_and_shape():
    curve = heteronuclear_theta_curve(1.0, 1e6, 60)
    ratios, angles = zip(*curve)
    assert ratios[0] == 1.0
    assert angles[0] == pytest.approx(math.degrees(ACOS_THIRD), abs=1e-9)
    assert angles[-1] == pytest.approx(180 - math.degrees(ACOS_THIRD), abs=1e-3)
    assert all(b > a for a, b in zip(angles, angles[1:]))
    assert dict(heteronuclear_theta_curve(2.0, 3.0, 2))[2.0] == pytest.approx(90.0, abs=1e-12)
    with pytest.raises(ValueError):
        heteronuclear_theta_curve(0.5, 2, 5)


def closed_form_bd_first(ratio):
    # thermal (ratio, 1) -> (r+1, r-1, 1-r, -r-1); swapped formula gives (4 - 2r) / 6r
    return math.degrees(math.acos((4 - 2 * ratio) / (6 * ratio)))


@settings(max_examples=300, deadline=None)
@given(st.floats(1.0, 1e4))
def test_bd_first_always_feasible_for_larger_spin1(ratio):
    x = thermal_state([ratio, 1.0])
    sol = solve_angles(x, GateOrder.BD_FIRST)
    assert math.degrees(sol.theta1) == pytest.approx(closed_form_bd_first(ratio), abs=1e-7)
    assert math.acos(1 / 3) - 1e-12 <= sol.theta1 <= math.pi - math.acos(1 / 3) + 1e-12
    assert epsilon(apply_network(x, sol.network()), x) <= 1e-10


@settings(max_examples=500, deadline=None)
@given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=4, max_size=4), st.sampled_from(list(GateOrder)))
def test_round_trip_exactness(pops, order):
    x = PopulationState(pops)
    b, c, d = (x.pops[2], x.pops[1], x.pops[3]) if order is GateOrder.BD_FIRST else (x.pops[1], x.pops[2], x.pops[3])
    # near c == d the angle comes from a ratio of two tiny numbers; skip that ill-conditioned band
    assume(abs(c - d) > 1e-6 and np.ptp(x.pops) > 1e-6)
    try:
        sol = solve_angles(x, order)
    except Infeasible:
        return
    assert epsilon(apply_network(x, sol.network()), x) <= 1e-10


@settings(max_examples=500, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=4, max_size=4))
def test_some_order_always_feasible(pops):
    results = solve_all(PopulationState(pops))
    assert not all(isinstance(r, Infeasible) for r in results.values())
