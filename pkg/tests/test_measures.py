from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsekit.constructions import point_horizon_ratio, window_cover
from coarsekit.errors import PreconditionError, ValidationError
from coarsekit.graphs import cycle_graph, graph_metric
from coarsekit.instances import line_space, random_cover, random_measure, random_metric_space
from coarsekit.measures import (
    DisjointFamily,
    ProbabilityMeasure,
    boundary_identity,
    brute_force_finder,
    cover_finder,
    heavy_support,
    msp_greedy,
    msp_to_ula,
    r_boundary,
    scan_boundary_set,
    ula_witness_check,
)
from coarsekit.metric import Cover

LINE4 = line_space([0, 1, 2, 3])
BLOCKS = line_space([0, 1, 10, 11])


def test_measure_validation():
    with pytest.raises(ValidationError, match="sum"):
        ProbabilityMeasure(LINE4, [0.5, 0.2, 0, 0])
    with pytest.raises(ValidationError, match="negative"):
        ProbabilityMeasure(LINE4, [1.5, -0.5, 0, 0])
    with pytest.raises(ValidationError, match="3 weights"):
        ProbabilityMeasure(LINE4, [0.5, 0.5, 0])
    mu = ProbabilityMeasure.uniform(LINE4, [1, 2])
    assert mu.support == {1, 2}
    assert mu.restricted([1]).weights.tolist() == [0, 1, 0, 0]


def test_r_boundary_examples():
    assert r_boundary(LINE4, range(4), 2) == frozenset()
    assert r_boundary(LINE4, {1}, 1.5) == {0, 2}
    assert r_boundary(LINE4, {1}, 0.5) == frozenset()
    assert r_boundary(LINE4, {1}, 1) == frozenset()
    assert r_boundary(LINE4, {1}, 1, closed=True) == {0, 2}
    assert r_boundary(LINE4, set(), 3) == frozenset()


def test_ula_examples():
    assert ula_witness_check(LINE4, ProbabilityMeasure.uniform(LINE4), range(4), 1, 0.01)
    P = line_space(range(5))
    ring = ProbabilityMeasure.uniform(P, [1, 3])
    assert not ula_witness_check(P, ring, {2}, 1.5, 0.5)
    far = ProbabilityMeasure.uniform(P, [4])
    assert not ula_witness_check(P, far, {0}, 1.5, 0.5)
    with pytest.raises(ValueError):
        ula_witness_check(P, far, set(), 1, 0.5)


def test_scan_whole_space():
    U = Cover.from_sets(LINE4, [range(4)])
    lab, pts = scan_boundary_set(LINE4, ProbabilityMeasure.uniform(LINE4), U, 2, 0.1)
    assert pts == frozenset(range(4))


def test_scan_arcs_on_c12():
    X = graph_metric(cycle_graph(12))
    U = window_cover(X, range(12), 4)
    mu = ProbabilityMeasure.uniform(X)
    assert scan_boundary_set(X, mu, U, 1, 0.1)[0] == 0
    # at R = 2 every arc has boundary mass 2/12 against its own 4/12
    assert point_horizon_ratio(X, U, 2).min_ratio == Fraction(2, 3)
    lab, pts = scan_boundary_set(X, mu, U, 2, 0.6)
    assert lab == 0 and pts == {0, 1, 2, 3}
    with pytest.raises(PreconditionError, match="2/3"):
        scan_boundary_set(X, mu, U, 2, 0.4)


def test_scan_point_mass():
    X = line_space(range(8))
    U = Cover.from_sets(X, [range(5), range(3, 8)])
    mu = ProbabilityMeasure.uniform(X, [6])
    assert scan_boundary_set(X, mu, U, 1.5, 0.1)[0] == 1


@settings(max_examples=100)
@given(st.integers(0, 10**6))
def test_scan_finds_element_under_hypothesis(seed):
    rng = np.random.default_rng(seed)
    X = random_metric_space(rng, int(rng.integers(2, 14)))
    U = random_cover(rng, X)
    mu = random_measure(rng, X)
    R = float(rng.uniform(0.5, 4))
    worst = min(point_horizon_ratio(X, U, R).ratios[x] for x in mu.support)
    eps = float(1 / worst - 1) * 1.01 + 1e-3
    lab, pts = scan_boundary_set(X, mu, U, R, eps)
    assert ula_witness_check(X, mu, pts, R, eps)


@given(st.integers(0, 10**6))
def test_boundary_identity(seed):
    rng = np.random.default_rng(seed)
    X = random_metric_space(rng, int(rng.integers(1, 16)))
    U = random_cover(rng, X)
    mu = random_measure(rng, X)
    R = float(rng.uniform(0.5, 5))
    lhs, rhs = boundary_identity(X, mu, U, R, exact=True)
    assert lhs == rhs
    a, b = boundary_identity(X, mu, U, R)
    assert a == pytest.approx(b, abs=1e-12)


def test_heavy_support_order():
    mu = ProbabilityMeasure(LINE4, [0.25, 0.5, 0.125, 0.125])
    assert heavy_support(mu, 0.7) == [1, 0]
    assert heavy_support(mu, 0.8) == [1, 0, 2]


def test_msp_two_blocks():
    mu = ProbabilityMeasure.uniform(BLOCKS)
    fam = msp_greedy(BLOCKS, mu, 3, 1, brute_force_finder(BLOCKS, 3, 1, 0.05), 0.9, 0.05)
    assert fam.members == ({0, 1}, {2, 3})
    assert fam.mass(mu) == 1


def test_msp_point_mass():
    mu = ProbabilityMeasure.uniform(LINE4, [2])
    fam = msp_greedy(LINE4, mu, 2, 0, brute_force_finder(LINE4, 2, 0, 0.1), 0.5, 0.1)
    assert fam.members == ({2},)
    assert fam.mass(mu) == 1


def test_msp_rejects_eps():
    mu = ProbabilityMeasure.uniform(LINE4)
    with pytest.raises(PreconditionError, match="too large"):
        msp_greedy(LINE4, mu, 1, 1, brute_force_finder(LINE4, 1, 1, 0.1), 0.9, 0.1)
    with pytest.raises(PreconditionError, match="0 < c < 1"):
        msp_greedy(LINE4, mu, 1, 1, brute_force_finder(LINE4, 1, 1, 0.1), 1.0, 0.1)


def test_msp_finder_failure_names_iteration():
    mu = ProbabilityMeasure.uniform(LINE4)
    with pytest.raises(PreconditionError, match="iteration 1"):
        msp_greedy(LINE4, mu, 5, 0, brute_force_finder(LINE4, 5, 0, 0.01), 0.5, 0.01)


def test_msp_with_cover_finder_on_cycle():
    X = graph_metric(cycle_graph(60))
    U = window_cover(X, range(0, 60, 2), 12)
    mu = ProbabilityMeasure.uniform(X)
    fam = msp_greedy(X, mu, 2, 11, cover_finder(X, U, 2, 0.5), 0.3, 0.5)
    fam.validate(X)
    assert fam.mass(mu) > 0.3


def test_msp_to_ula_examples():
    mu = ProbabilityMeasure.uniform(BLOCKS, [0])
    assert msp_to_ula(BLOCKS, mu, DisjointFamily((frozenset({0, 1}),), 2), 1, 0.1) == (0, {0, 1})
    mu = ProbabilityMeasure.uniform(BLOCKS)
    fam = DisjointFamily((frozenset({0, 1}), frozenset({2, 3})), 2)
    assert msp_to_ula(BLOCKS, mu, fam, 1, 0.1)[0] == 0


def test_msp_to_ula_skips_heavy_boundary():
    X = line_space([0, 1, 2, 10, 11])
    mu = ProbabilityMeasure(X, [0.1, 0.1, 0.04, 0.4, 0.36])
    fam = DisjointFamily((frozenset({0, 1}), frozenset({3, 4})), 3)
    assert msp_to_ula(X, mu, fam, 1.5, 0.1) == (1, {3, 4})


def test_msp_to_ula_preconditions():
    mu = ProbabilityMeasure.uniform(BLOCKS)
    with pytest.raises(PreconditionError, match="mass"):
        msp_to_ula(BLOCKS, mu, DisjointFamily((frozenset({0}),), 2), 1, 0.1)
    with pytest.raises(ValidationError, match="apart"):
        msp_to_ula(BLOCKS, mu, DisjointFamily((frozenset({0}), frozenset({1})), 2), 1, 0.1)


@given(st.integers(0, 10**6))
def test_msp_brute_force_outputs(seed):
    rng = np.random.default_rng(seed)
    pts = np.sort(rng.choice(40, size=int(rng.integers(1, 8)), replace=False))
    X = line_space(pts)
    mu = random_measure(rng, X)
    R, S, c, eps = 2.0, 6.0, 0.5, 0.2
    try:
        fam = msp_greedy(X, mu, R, S, brute_force_finder(X, R, S, eps), c, eps)
    except PreconditionError:
        return
    fam.validate(X)
    assert fam.mass(mu) > c
    assert all(X.dist[np.ix_(sorted(Z), sorted(Z))].max() <= S for Z in fam.members)
