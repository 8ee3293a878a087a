import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudopure import DegenerateInitial, PopulationState, epsilon, pseudo_pure_target, thermal_state
from pseudopure.statemodel import bit, is_pseudo_pure


def thermal_by_loops(p):
    # direct evaluation of sum_i p_i (1 - 2 bit_i(s)), qubit 1 most significant
    n = len(p)
    out = []
    for s in range(2**n):
        total = 0.0
        for i in range(n):
            b = (s >> (n - 1 - i)) & 1
            total += p[i] * (1 - 2 * b)
        out.append(total)
    return out


@pytest.mark.parametrize(
    "pol, expected",
    [
        ((1, 1), [2, 0, 0, -2]),
        ((0, 0), [0, 0, 0, 0]),
        ((2, 1), [3, 1, -1, -3]),
        ((1, 1, 1), [3, 1, 1, -1, 1, -1, -1, -3]),
    ],
)
def test_thermal_examples(pol, expected):
    assert thermal_state(pol).pops.tolist() == expected
    assert thermal_by_loops(pol) == expected


def test_thermal_homonuclear_pattern(thermal2):
    a, b, c, d = thermal2.pops
    assert d == -a and b == c == 0


def test_basis_convention_last_qubit_fastest():
    assert [bit(s, 2, 2) for s in range(4)] == [0, 1, 0, 1]
    assert [bit(s, 1, 2) for s in range(4)] == [0, 0, 1, 1]


def test_state_validation():
    with pytest.raises(ValueError):
        PopulationState([1, 2, 3])
    with pytest.raises(ValueError):
        PopulationState([1.0])
    with pytest.raises(ValueError):
        PopulationState([1.0, math.nan])
    s = PopulationState([1, 0, 0, -1])
    assert s.n_qubits == 2
    with pytest.raises(ValueError):
        s.pops[0] = 3.0


def test_target_examples():
    assert np.allclose(pseudo_pure_target(PopulationState([1, 0, 0, -1])).pops, [1, -1 / 3, -1 / 3, -1 / 3], atol=1e-15)
    t3 = pseudo_pure_target(thermal_state([1, 1, 1]))
    assert np.allclose(t3.pops, [3] + [-3 / 7] * 7, atol=1e-15)
    pp = PopulationState([1, -1 / 3, -1 / 3, -1 / 3])
    assert pseudo_pure_target(pp).allclose(pp)


def test_epsilon_examples():
    x = PopulationState([1, 0, 0, -1])
    assert epsilon(x, x) == pytest.approx(1.0, abs=1e-15)
    assert epsilon(PopulationState([1, -0.25, -0.5, -0.25]), x) == pytest.approx(0.25, abs=1e-15)
    assert epsilon(pseudo_pure_target(x), x) == pytest.approx(0.0, abs=1e-15)


def test_epsilon_degenerate_initial():
    pp = PopulationState([1, -1 / 3, -1 / 3, -1 / 3])
    with pytest.raises(DegenerateInitial):
        epsilon(pp, pp)
    with pytest.raises(DegenerateInitial):
        epsilon(thermal_state([0, 0]), thermal_state([0, 0]))


def test_epsilon_dimension_mismatch(thermal2, thermal3):
    with pytest.raises(ValueError):
        epsilon(thermal3, thermal2)


unit = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def pops(draw, n=None):
    n = draw(st.integers(1, 4)) if n is None else n
    return PopulationState(draw(st.lists(unit, min_size=2**n, max_size=2**n)))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=5))
def test_thermal_sums_to_zero(pol):
    assert abs(thermal_state(pol).pops.sum()) <= 1e-12


@settings(max_examples=300, deadline=None)
@given(pops())
def test_target_idempotent_and_conserving(s):
    t = pseudo_pure_target(s)
    assert pseudo_pure_target(t).allclose(t)
    assert t.pops[0] == s.pops[0]
    assert abs(t.pops.sum() - s.pops.sum()) <= 1e-12
    assert is_pseudo_pure(t)


@settings(max_examples=300, deadline=None)
@given(pops(n=3), pops(n=3), st.floats(0.01, 100.0))
def test_epsilon_scale_invariant(state, initial, k):
    try:
        e = epsilon(state, initial)
    except DegenerateInitial:
        return
    if np.linalg.norm(initial.pops - pseudo_pure_target(initial).pops) < 1e-6:
        return
    scaled = epsilon(PopulationState(k * state.pops), PopulationState(k * initial.pops))
    assert scaled == pytest.approx(e, rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(pops(n=2))
def test_epsilon_zero_iff_target(initial):
    if np.linalg.norm(initial.pops - pseudo_pure_target(initial).pops) < 1e-6:
        return
    assert epsilon(pseudo_pure_target(initial), initial) <= 1e-12
    assert epsilon(initial, initial) > 1e-12
