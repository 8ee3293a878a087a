import itertools
import math

import numpy as np
import pytest

from pseudopure import GateNetwork, PopulationState, apply_network, epsilon, thermal_state
from pseudopure.errors import UnsupportedSpec
from pseudopure.netsearch import (
    HALF_PI,
    AngleMode,
    Family,
    SearchSpec,
    Slot,
    Topology,
    asymptotic_survey,
    canonical_form,
    enumerate_networks,
    eps_histogram,
    evaluate_fixed,
    expected_count,
    group_classes,
    is_canonical,
    optimize_network,
    run_search,
    shared_angle_profile,
)

AP3 = Topology.all_pairs(3)
CH3 = Topology.chain(3)
ACOS_THIRD = math.acos(1 / 3)


@pytest.mark.parametrize(
    "spec, count",
    [
        (SearchSpec(AP3, 5), 625),
        (SearchSpec(CH3, 5), 162),
        (SearchSpec(AP3, 6, family=Family.PERMUTATION), 120),
        (SearchSpec(CH3, 4, family=Family.PERMUTATION), 12),
        (SearchSpec(CH3, 4, AngleMode.DISCRETE, Family.PERMUTATION), 192),
        (SearchSpec(CH3, 4, AngleMode.DISCRETE, Family.FREEFORM), 432),
        (SearchSpec(CH3, 5, AngleMode.DISCRETE, Family.FREEFORM), 2592),
        (SearchSpec(Topology.all_pairs(2), 3), 1),
    ],
)
def test_enumeration_counts(spec, count):
    cands = enumerate_networks(spec)
    assert len(cands) == count == expected_count(spec)
    assert len(set(cands)) == count


def test_sequential_structure():
    spec = SearchSpec(AP3, 4)
    for cand in enumerate_networks(spec):
        pairs = [s.pair for s in cand]
        assert all(a != b for a, b in zip(pairs, pairs[1:]))
        assert pairs[0] == (1, 2)
        assert cand[-1].theta == HALF_PI
        assert all(s.theta is None for s in cand[:-1])


def test_symmetry_orbits():
    assert canonical_form([(3, 1), (1, 2)], AP3) == ((1, 2), (2, 3))
    assert canonical_form([(3, 2)], CH3) == ((1, 2),)
    for cand in enumerate_networks(SearchSpec(AP3, 6, AngleMode.HALF_PI, Family.PERMUTATION)):
        assert is_canonical([s.pair for s in cand], AP3)
    orbits = {canonical_form(p, AP3) for p in itertools.permutations(AP3.gates())}
    assert len(orbits) == 120


def test_spec_validation():
    with pytest.raises(UnsupportedSpec):
        SearchSpec(Topology.all_pairs(4), 4)
    with pytest.raises(UnsupportedSpec):
        SearchSpec(AP3, 5, family=Family.PERMUTATION)
    with pytest.raises(UnsupportedSpec):
        SearchSpec(AP3, 4, AngleMode.DISCRETE, Family.FREEFORM)
    with pytest.raises(UnsupportedSpec):
        SearchSpec(CH3, 4, AngleMode.CONTINUOUS, Family.FREEFORM)


def test_two_qubit_optimum(thermal2):
    res = optimize_network([(1, 2), (2, 1)], thermal2)
    assert res.eps <= 1e-10 and res.perfect
    assert res.angles[0] == pytest.approx(ACOS_THIRD, abs=1e-7)
    assert res.angles[1] == HALF_PI


def test_discrete_and_half_pi_modes(thermal2):
    res = optimize_network([(1, 2), (2, 1)], thermal2, mode=AngleMode.DISCRETE)
    brute = min(
        epsilon(apply_network(thermal2, GateNetwork.from_specs([(1, 2, a), (2, 1, b)])), thermal2)
        for a in (HALF_PI, math.pi)
        for b in (HALF_PI, math.pi)
    )
    assert res.eps == pytest.approx(brute, abs=1e-15)
    half = optimize_network([(1, 2), (2, 1)], thermal2, mode=AngleMode.HALF_PI)
    assert half.eps == pytest.approx(0.25, abs=1e-15)


def test_result_reverifies(thermal3):
    res = optimize_network([(2, 1), (2, 3), (1, 2), (2, 3), (3, 2)], thermal3)
    assert res.perfect
    assert epsilon(apply_network(thermal3, res.network), thermal3) == pytest.approx(res.eps, abs=1e-14)
    # mirror of the nearest-neighbour chain solution: transfer angles near 98.21 and 135.58 deg
    deg = sorted(round(a, 1) for a in res.angles_deg[:-1])
    assert any(abs(a - 98.2) < 0.1 for a in deg) and any(abs(a - 135.6) < 0.1 for a in deg)


def test_evaluate_fixed_matches_kernel(thermal3, rng):
    cands = enumerate_networks(SearchSpec(AP3, 3, AngleMode.DISCRETE))
    errs = evaluate_fixed(cands, thermal3)
    for i in rng.choice(len(cands), 20, replace=False):
        net = GateNetwork.from_specs([(s.control, s.target, s.theta) for s in cands[i]])
        assert errs[i] == pytest.approx(epsilon(apply_network(thermal3, net), thermal3), abs=1e-14)


def test_shared_angle_profile_first_rows(thermal2):
    rows = shared_angle_profile([(1, 2), (2, 1)], thermal2, 2)
    assert rows[0][1] == pytest.approx(0.25, abs=1e-15)
    assert rows[0][2] == pytest.approx(0.143735, abs=1e-6)
    assert rows[0][3] == pytest.approx(77.780, abs=1e-3)
    assert rows[1][1] == pytest.approx(0.0625, abs=1e-15)


def test_survey_and_classes(thermal3):
    rows = asymptotic_survey(SearchSpec(AP3, 6, AngleMode.HALF_PI, Family.PERMUTATION), 2)
    assert len(rows) == 120
    assert [r.rank for r in rows] == list(range(1, 121))
    first = [r.eps[0] for r in rows]
    assert first == sorted(first)
    sizes = sorted(len(g) for g in group_classes(first))
    assert sizes[-1] == 68 and sum(sizes) == 120
    with pytest.raises(UnsupportedSpec):
        asymptotic_survey(SearchSpec(AP3, 6, family=Family.PERMUTATION), 2)


def test_group_classes_and_histogram():
    assert group_classes([0.3, 0.1, 0.10005, 0.5]) == [[1, 2], [0], [3]]
    assert eps_histogram([0.0, 1e-20, 0.05, 0.5, 0.02]) == {-16: 2, -2: 2, -1: 1}


def test_search_deterministic_and_worker_free():
    spec = SearchSpec(CH3, 3, seed=7)
    a = run_search(spec)
    b = run_search(spec, workers=2)
    assert [(r.gate_list, r.angles.tolist(), r.eps) for r in a.results] == [
        (r.gate_list, r.angles.tolist(), r.eps) for r in b.results
    ]
    assert a.count_total == 18
    assert "perfect:" in a.summary()


def test_longer_networks_do_no_worse():
    # p = 4 contains every p = 3 network extended by a gate that can act as identity
    b3 = run_search(SearchSpec(CH3, 3)).best.eps
    b4 = run_search(SearchSpec(CH3, 4)).best.eps
    assert b4 <= b3 + 1e-9


def test_heteronuclear_initial_is_respected():
    x = thermal_state([4.0, 2.0, 1.0])
    spec = SearchSpec(CH3, 2, AngleMode.HALF_PI, initial=x)
    report = run_search(spec)
    for res in report.results:
        assert res.eps == pytest.approx(epsilon(apply_network(x, res.network), x), abs=1e-14)
    with pytest.raises(ValueError):
        SearchSpec(CH3, 2, initial=PopulationState([1, 0, 0, -1]))
